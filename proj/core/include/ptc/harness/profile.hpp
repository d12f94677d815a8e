#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ptc::harness {

// Largest allowed spacing between consecutive samples, s.
inline constexpr double kMaxProfileGap = 300.0;

// Weather time series. time_s is seconds after local solar midnight. n_o is
// either empty (computed from the site geometry) or one value per sample.
struct Profile {
  std::string name;
  std::vector<double> time_s;
  std::vector<double> dni;        // W/m^2
  std::vector<double> t_ambient;  // degC
  std::vector<double> n_o;

  std::size_t size() const { return time_s.size(); }
  bool has_geometry() const { return !n_o.empty(); }
  double start() const { return time_s.front(); }
  double end() const { return time_s.back(); }
};

struct ProfilePoint {
  double dni;
  double t_ambient;
  double n_o;  // NaN when the profile carries no geometry
};

// Linear interpolation, held constant outside the covered span.
ProfilePoint sample(const Profile& p, double t);

// Throws IngestionError: empty profile, column lengths differ, non-increasing
// time, gaps over max_gap, negative irradiance, n_o outside [0, 1].
void validate_profile(const Profile& p, double max_gap = kMaxProfileGap);

// CSV with header time_s,dni_wm2,t_ambient_c[,n_o]. Errors carry the 1-based
// line number.
Profile load_profile(const std::filesystem::path& path, double max_gap = kMaxProfileGap);
// Shortest round-trip formatting, so load(save(p)) == p.
void save_profile(const Profile& p, const std::filesystem::path& path);

// Sine-bump clear-sky day with square-well cloud events.
struct CloudEvent {
  double start_s;
  double duration_s;
  double transmission;  // DNI multiplier during the event
};

struct ClearSkyOptions {
  std::string name = "clear-sky";
  double start_s = 5.0 * 3600.0;
  double end_s = 21.0 * 3600.0;
  double step_s = 30.0;
  double sunrise_s = 6.0 * 3600.0;
  double sunset_s = 20.0 * 3600.0;
  double peak_dni = 900.0;
  // DNI = peak * sin(pi * (t - sunrise) / daylength)^shape.
  double shape = 0.5;
  double t_ambient_min = 22.0;  // at sunrise
  double t_ambient_max = 36.0;  // mid-afternoon
  std::vector<CloudEvent> clouds;
};

Profile clear_sky_profile(const ClearSkyOptions& options);

enum class WeatherClass { sunny, partly_cloudy, cloudy };
std::string_view to_string(WeatherClass w);

// A day of the given class with peak DNI and cloud events drawn from the
// seed.
Profile synthetic_day(WeatherClass w, std::uint64_t seed, const ClearSkyOptions& base = {});

}  // namespace ptc::harness
