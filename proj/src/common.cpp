#include "pfha/common.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace pfha {

namespace {
std::mutex g_warn_mutex;
std::function<void(const std::string&)> g_warn_handler;
}  // namespace

void warn(const std::string& msg) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  if (g_warn_handler) {
    g_warn_handler(msg);
  } else {
    std::cerr << "warning: " << msg << "\n";
  }
}

void set_warning_handler(std::function<void(const std::string&)> handler) {
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  g_warn_handler = std::move(handler);
}

FrpeKind parse_frpe_kind(const std::string& text) {
  if (text == "sfr") return FrpeKind::sfr;
  if (text == "physics") return FrpeKind::physics;
  throw ConfigError("unknown frequency-response engine: " + text);
}

std::string to_string(FrpeKind kind) {
  return kind == FrpeKind::sfr ? "sfr" : "physics";
}

}  // namespace pfha
