#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ptc::harness {

// Flat typed key-value configuration.
//
//   # comment
//   key = value
//   include other.cfg      (relative to the including file)
//
// Later assignments override earlier ones, so a file can include a base and
// then adjust it. Errors are ConfigError carrying file and line.
class Config {
 public:
  static Config load(const std::filesystem::path& path);
  static Config parse(std::string_view text, const std::filesystem::path& base_dir = {},
                      const std::string& origin = "<string>");

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return values_; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma-separated numbers.
  std::vector<double> get_doubles(const std::string& key) const;
  std::optional<std::vector<double>> find_doubles(const std::string& key) const;

  // Path values are resolved against the directory of the file that set them.
  std::filesystem::path get_path(const std::string& key) const;
  std::filesystem::path get_path(const std::string& key, const std::filesystem::path& fallback) const;

 private:
  void parse_into(std::string_view text, const std::filesystem::path& base_dir,
                  const std::string& origin, int depth);
  const std::string& raw(const std::string& key) const;

  std::map<std::string, std::string> values_;
  std::map<std::string, std::filesystem::path> dirs_;
};

}  // namespace ptc::harness
