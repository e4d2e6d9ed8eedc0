#ifndef PFHA_CSV_HPP
#define PFHA_CSV_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pfha {

// Delimited text with a header row. Lines starting with '#' are comments.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // -1 when the column is absent and required == false.
  int column(const std::string& name, bool required = true) const;
};

Table read_delimited(const std::filesystem::path& path, char delim = ',');
std::vector<std::string> split(const std::string& line, char delim);

double parse_double(const std::string& s, const std::string& context);

// Seconds since the Unix epoch, UTC. Accepts YYYY-MM-DD[T ]HH:MM:SS with an
// optional trailing Z; a bare date reads as midnight.
std::int64_t parse_iso8601(const std::string& s);
std::string format_iso8601(std::int64_t epoch_s);

inline double years_between(std::int64_t from_epoch_s, std::int64_t to_epoch_s) {
  return static_cast<double>(to_epoch_s - from_epoch_s) / (365.25 * 86400.0);
}

// Locale-independent numeric formatting for output tables: 9 significant
// digits, '.' decimal separator.
std::string format_g9(double x);
// Round-trip precision, used by the grid cache values only where needed.
std::string format_full(double x);

}  // namespace pfha

#endif
