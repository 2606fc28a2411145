#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace kronop {

/// Line-oriented configuration: `[section]` headers, `key = value` entries,
/// `#` comments, booleans true/false, comma-separated lists. Keys are
/// addressed as "section.key". Every key must be consumed by the reader;
/// check_all_consumed() rejects unknown keys.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const;

  /// Insert or overwrite an entry (CLI flag overrides).
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback);
  std::string require_string(const std::string& key);
  double get_real(const std::string& key, double fallback);
  double require_real(const std::string& key);
  int get_int(const std::string& key, int fallback);
  long get_long(const std::string& key, long fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<double> get_real_list(const std::string& key, std::vector<double> fallback);
  std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback);

  /// Throws ParameterError naming any key that was never read.
  void check_all_consumed() const;

  /// Every key touched by a getter with its resolved value, defaults
  /// included; this is what the run manifest records.
  const std::map<std::string, std::string>& resolved() const { return resolved_; }

 private:
  std::string raw(const std::string& key);
  std::map<std::string, std::string> entries_;
  std::map<std::string, int> lines_;
  std::set<std::string> consumed_;
  std::map<std::string, std::string> resolved_;
  std::string origin_;
};

}  // namespace kronop
