#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace collapse {

/// Flat key=value configuration: one `key = value` per line, `#` comments,
/// blank lines ignored. Duplicate keys are rejected; unknown keys are
/// reported by finish() so typos never silently change an experiment.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  long get_long(const std::string& key);
  long get_long(const std::string& key, long fallback);

  /// Comma-separated lists.
  std::vector<double> get_double_list(const std::string& key);
  std::vector<long> get_long_list(const std::string& key);

  /// Throws when some keys were never consumed (unknown keys).
  void finish() const;

 private:
  std::string take(const std::string& key);
  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
};

std::vector<double> parse_double_list(const std::string& text);
std::vector<long> parse_long_list(const std::string& text);

}  // namespace collapse
