#include "ptc/harness/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "ptc/errors.hpp"
#include "ptc/text.hpp"

namespace ptc::harness {

ProfilePoint sample(const Profile& p, double t) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto at = [&](std::size_t i) {
    return ProfilePoint{p.dni[i], p.t_ambient[i], p.has_geometry() ? p.n_o[i] : nan};
  };
  if (t <= p.time_s.front()) return at(0);
  if (t >= p.time_s.back()) return at(p.size() - 1);
  const auto it = std::upper_bound(p.time_s.begin(), p.time_s.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - p.time_s.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - p.time_s[lo]) / (p.time_s[hi] - p.time_s[lo]);
  const auto lerp = [w](double a, double b) { return a + w * (b - a); };
  return {lerp(p.dni[lo], p.dni[hi]), lerp(p.t_ambient[lo], p.t_ambient[hi]),
          p.has_geometry() ? lerp(p.n_o[lo], p.n_o[hi]) : nan};
}

void validate_profile(const Profile& p, double max_gap) {
  const std::size_t n = p.size();
  if (n == 0) throw IngestionError("profile '" + p.name + "' is empty");
  if (p.dni.size() != n || p.t_ambient.size() != n || (p.has_geometry() && p.n_o.size() != n)) {
    throw IngestionError("profile '" + p.name + "': columns have different lengths");
  }
  // Record i sits on line i + 2 of the CSV form.
  for (std::size_t i = 0; i < n; ++i) {
    const long line = static_cast<long>(i) + 2;
    if (!std::isfinite(p.time_s[i]) || !std::isfinite(p.dni[i]) || !std::isfinite(p.t_ambient[i])) {
      throw IngestionError("profile '" + p.name + "': non-finite value", line);
    }
    if (p.dni[i] < 0.0) throw IngestionError("profile '" + p.name + "': negative irradiance", line);
    if (p.has_geometry() && !(p.n_o[i] >= 0.0 && p.n_o[i] <= 1.0)) {
      throw IngestionError("profile '" + p.name + "': n_o outside [0, 1]", line);
    }
    if (i > 0) {
      if (!(p.time_s[i] > p.time_s[i - 1])) {
        throw IngestionError("profile '" + p.name + "': time not strictly increasing", line);
      }
      if (p.time_s[i] - p.time_s[i - 1] > max_gap) {
        throw IngestionError("profile '" + p.name + "': gap of " +
                                 text::format_double(p.time_s[i] - p.time_s[i - 1]) + " s exceeds " +
                                 text::format_double(max_gap) + " s",
                             line);
      }
    }
  }
}

Profile load_profile(const std::filesystem::path& path, double max_gap) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open profile " + path.string());
  Profile p;
  p.name = path.stem().string();
  std::string line;
  if (!std::getline(in, line)) throw IngestionError(path.string() + ": empty file", 1);
  const auto header = text::split(text::trim(line), ',');
  bool geometry = false;
  if (header.size() == 4 && text::trim(header[3]) == "n_o") {
    geometry = true;
  } else if (header.size() != 3) {
    throw IngestionError(path.string() + ": header must be time_s,dni_wm2,t_ambient_c[,n_o]", 1);
  }
  if (text::trim(header[0]) != "time_s" || text::trim(header[1]) != "dni_wm2" ||
      text::trim(header[2]) != "t_ambient_c") {
    throw IngestionError(path.string() + ": header must be time_s,dni_wm2,t_ambient_c[,n_o]", 1);
  }
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto f = text::split(text::trim(line), ',');
    if (f.size() != header.size()) {
      throw IngestionError(path.string() + ": expected " + std::to_string(header.size()) + " fields",
                           line_no);
    }
    double v[4] = {0, 0, 0, 0};
    for (std::size_t c = 0; c < f.size(); ++c) {
      const auto x = text::parse_double(f[c]);
      if (!x) throw IngestionError(path.string() + ": field " + std::to_string(c + 1) + " is not a number", line_no);
      v[c] = *x;
    }
    if (!p.time_s.empty() && !(v[0] > p.time_s.back())) {
      throw IngestionError(path.string() + ": time not strictly increasing", line_no);
    }
    if (!p.time_s.empty() && v[0] - p.time_s.back() > max_gap) {
      throw IngestionError(path.string() + ": gap exceeds " + text::format_double(max_gap) + " s", line_no);
    }
    if (v[1] < 0.0) throw IngestionError(path.string() + ": negative irradiance", line_no);
    p.time_s.push_back(v[0]);
    p.dni.push_back(v[1]);
    p.t_ambient.push_back(v[2]);
    if (geometry) p.n_o.push_back(v[3]);
  }
  validate_profile(p, max_gap);
  return p;
}

void save_profile(const Profile& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write profile to " + path.string());
  out << "time_s,dni_wm2,t_ambient_c" << (p.has_geometry() ? ",n_o" : "") << '\n';
  for (std::size_t i = 0; i < p.size(); ++i) {
    out << text::format_double(p.time_s[i]) << ',' << text::format_double(p.dni[i]) << ','
        << text::format_double(p.t_ambient[i]);
    if (p.has_geometry()) out << ',' << text::format_double(p.n_o[i]);
    out << '\n';
  }
  if (!out) throw IngestionError("write failed for " + path.string());
}

Profile clear_sky_profile(const ClearSkyOptions& o) {
  if (!(o.step_s > 0.0 && o.end_s > o.start_s && o.sunset_s > o.sunrise_s && o.peak_dni >= 0.0)) {
    throw ConfigError("clear_sky_profile: inconsistent day definition");
  }
  Profile p;
  p.name = o.name;
  const double day = o.sunset_s - o.sunrise_s;
  const auto n = static_cast<std::size_t>(std::floor((o.end_s - o.start_s) / o.step_s + 1e-9)) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = o.start_s + static_cast<double>(i) * o.step_s;
    double dni = 0.0;
    if (t > o.sunrise_s && t < o.sunset_s) {
      dni = o.peak_dni * std::pow(std::sin(std::numbers::pi * (t - o.sunrise_s) / day), o.shape);
    }
    for (const auto& c : o.clouds) {
      if (t >= c.start_s && t < c.start_s + c.duration_s) dni *= c.transmission;
    }
    // Ambient follows a cosine lagging the sun by three hours.
    const double phase = 2.0 * std::numbers::pi * (t - (o.sunrise_s + 0.5 * day + 3.0 * 3600.0)) / 86400.0;
    const double t_amb =
        o.t_ambient_min + (o.t_ambient_max - o.t_ambient_min) * 0.5 * (1.0 + std::cos(phase));
    p.time_s.push_back(t);
    p.dni.push_back(dni);
    p.t_ambient.push_back(t_amb);
  }
  return p;
}

std::string_view to_string(WeatherClass w) {
  switch (w) {
    case WeatherClass::sunny: return "sunny";
    case WeatherClass::partly_cloudy: return "partly_cloudy";
    case WeatherClass::cloudy: return "cloudy";
  }
  return "unknown";
}

Profile synthetic_day(WeatherClass w, std::uint64_t seed, const ClearSkyOptions& base) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ClearSkyOptions o = base;
  o.name = std::string(to_string(w)) + "-" + std::to_string(seed);
  o.clouds.clear();
  const double day = o.sunset_s - o.sunrise_s;
  const auto add_clouds = [&](int count, double min_dur, double max_dur, double min_tr, double max_tr) {
    for (int i = 0; i < count; ++i) {
      CloudEvent c;
      c.duration_s = min_dur + (max_dur - min_dur) * u(rng);
      c.start_s = o.sunrise_s + (day - c.duration_s) * u(rng);
      c.transmission = min_tr + (max_tr - min_tr) * u(rng);
      o.clouds.push_back(c);
    }
  };
  switch (w) {
    case WeatherClass::sunny:
      o.peak_dni = 850.0 + 150.0 * u(rng);
      break;
    case WeatherClass::partly_cloudy:
      o.peak_dni = 800.0 + 150.0 * u(rng);
      add_clouds(2 + static_cast<int>(4.0 * u(rng)), 600.0, 3600.0, 0.1, 0.7);
      break;
    case WeatherClass::cloudy:
      o.peak_dni = 500.0 + 200.0 * u(rng);
      add_clouds(1, 0.5 * day, 0.8 * day, 0.2, 0.5);
      add_clouds(3, 900.0, 3600.0, 0.0, 0.3);
      break;
  }
  return clear_sky_profile(o);
}

}  // namespace ptc::harness
