#include "ptc/harness/config.hpp"

#include <fstream>
#include <sstream>

#include "ptc/errors.hpp"
#include "ptc/text.hpp"

namespace ptc::harness {
namespace {

constexpr int kMaxIncludeDepth = 16;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
  Config c;
  c.parse_into(read_file(path), path.parent_path(), path.string(), 0);
  return c;
}

Config Config::parse(std::string_view text, const std::filesystem::path& base_dir,
                     const std::string& origin) {
  Config c;
  c.parse_into(text, base_dir, origin, 0);
  return c;
}

void Config::parse_into(std::string_view text, const std::filesystem::path& base_dir,
                        const std::string& origin, int depth) {
  if (depth > kMaxIncludeDepth) throw ConfigError(origin + ": includes nested too deeply");
  int line_no = 0;
  for (std::string_view raw_line : text::split(text, '\n')) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    std::string_view line = raw_line;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;

    if (line.rfind("include", 0) == 0 && line.find('=') == std::string_view::npos) {
      const auto target = text::trim(line.substr(7));
      if (target.empty()) throw ConfigError(where + ": include needs a path");
      std::filesystem::path p(target);
      if (p.is_relative()) p = base_dir / p;
      parse_into(read_file(p), p.parent_path(), p.string(), depth + 1);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key(text::trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(where + ": empty key");
    values_[key] = std::string(text::trim(line.substr(eq + 1)));
    dirs_[key] = base_dir;
  }
}

const std::string& Config::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key) const { return raw(key); }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? raw(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  const auto v = text::parse_double(raw(key));
  if (!v) throw ConfigError("config key '" + key + "' is not a number: '" + raw(key) + "'");
  return *v;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
  const auto v = text::parse_int(raw(key));
  if (!v) throw ConfigError("config key '" + key + "' is not an integer: '" + raw(key) + "'");
  return *v;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = raw(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "' is not a boolean: '" + v + "'");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (std::string_view field : text::split(raw(key), ',')) {
    const auto v = text::parse_double(field);
    if (!v) throw ConfigError("config key '" + key + "' has a non-numeric entry '" + std::string(field) + "'");
    out.push_back(*v);
  }
  return out;
}

std::optional<std::vector<double>> Config::find_doubles(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_doubles(key);
}

std::filesystem::path Config::get_path(const std::string& key) const {
  std::filesystem::path p(raw(key));
  if (p.is_relative()) {
    const auto it = dirs_.find(key);
    if (it != dirs_.end() && !it->second.empty()) p = it->second / p;
  }
  return p;
}

std::filesystem::path Config::get_path(const std::string& key, const std::filesystem::path& fallback) const {
  return has(key) ? get_path(key) : fallback;
}

}  // namespace ptc::harness
