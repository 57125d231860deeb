#include "collapse/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace collapse {

namespace {

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) + " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("config: empty key on line " + std::to_string(lineno));
    if (!config.values_.emplace(key, value).second)
      throw std::runtime_error("config: duplicate key '" + key + "'");
  }
  return config;
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) > 0; }

std::string KeyValueConfig::take(const std::string& key) {
  const auto it = values_.find(key);
  if (it == values_.end()) throw std::runtime_error("config: missing key '" + key + "'");
  consumed_.insert(key);
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key) { return take(key); }

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) {
  if (!has(key)) return fallback;
  return take(key);
}

double KeyValueConfig::get_double(const std::string& key) {
  const std::string text = take(key);
  try {
    size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + key + "' is not a number: " + text);
  }
}

double KeyValueConfig::get_double(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  return get_double(key);
}

long KeyValueConfig::get_long(const std::string& key) {
  const std::string text = take(key);
  try {
    size_t used = 0;
    const long value = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + key + "' is not an integer: " + text);
  }
}

long KeyValueConfig::get_long(const std::string& key, long fallback) {
  if (!has(key)) return fallback;
  return get_long(key);
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) {
  return parse_double_list(take(key));
}

std::vector<long> KeyValueConfig::get_long_list(const std::string& key) {
  return parse_long_list(take(key));
}

void KeyValueConfig::finish() const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    if (!consumed_.count(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty()) throw std::runtime_error("config: unknown keys: " + unknown);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  if (values.empty()) throw std::runtime_error("config: empty list: " + text);
  return values;
}

std::vector<long> parse_long_list(const std::string& text) {
  std::vector<long> values;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    values.push_back(std::stol(item));
  }
  if (values.empty()) throw std::runtime_error("config: empty list: " + text);
  return values;
}

}  // namespace collapse
