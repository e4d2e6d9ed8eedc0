#ifndef PFHA_COMMON_HPP
#define PFHA_COMMON_HPP

#include <functional>
#include <stdexcept>
#include <string>

namespace pfha {

// Error classes map onto CLI exit codes: config 2, data 3, numeric 4.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-fatal diagnostics (empty inputs, clamped queries, skipped records).
// Default handler prints to stderr; tests install a collector.
void warn(const std::string& msg);
void set_warning_handler(std::function<void(const std::string&)> handler);

inline constexpr double kNominalFrequencyHz = 50.0;

// Which frequency-response prediction engine evaluates a cell.
enum class FrpeKind { sfr, physics };

FrpeKind parse_frpe_kind(const std::string& text);
std::string to_string(FrpeKind kind);

}  // namespace pfha

#endif
