#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace jtprec {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(key) {}
  [[nodiscard]] const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Flat key=value configuration. Lines starting with '#' are comments.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  /// Applies "key=value"; throws ConfigError when '=' is missing.
  void apply_override(const std::string& assignment);

  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
  [[nodiscard]] const std::string& get_string(const std::string& key) const;
  [[nodiscard]] double get_double(const std::string& key) const;
  [[nodiscard]] long long get_int(const std::string& key) const;
  [[nodiscard]] std::uint64_t get_uint64(const std::string& key) const;
  [[nodiscard]] bool get_bool(const std::string& key) const;
  /// Comma or whitespace separated list. Accepts "inf" for +infinity.
  [[nodiscard]] std::vector<double> get_doubles(const std::string& key) const;
  [[nodiscard]] std::vector<std::string> get_strings(const std::string& key) const;

  [[nodiscard]] double get_double_or(const std::string& key, double fallback) const;
  [[nodiscard]] long long get_int_or(const std::string& key, long long fallback) const;
  [[nodiscard]] bool get_bool_or(const std::string& key, bool fallback) const;
  [[nodiscard]] std::string get_string_or(const std::string& key,
                                          const std::string& fallback) const;

  [[nodiscard]] const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Parses a double, accepting "inf"/"+inf"/"infinity". Throws ConfigError
/// tagged with `key` on failure.
double parse_double(const std::string& key, const std::string& text);

}  // namespace jtprec
