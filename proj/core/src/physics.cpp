#include "ptc/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ptc/errors.hpp"

namespace ptc::physics {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_fluid_range(const char* fn, double t_f) {
  if (!(t_f >= kMinFluidTemperature)) {
    throw DomainError(std::string(fn) + ": temperature " + std::to_string(t_f) +
                      " degC below lower bound 0 degC");
  }
  if (!(t_f <= kMaxFluidTemperature)) {
    throw DomainError(std::string(fn) + ": temperature " + std::to_string(t_f) +
                      " degC above upper bound 450 degC");
  }
}

}  // namespace

double fluid_density(double t_f) {
  check_fluid_range("fluid_density", t_f);
  return 1061.5 - 0.5787 * t_f - 9.0242e-4 * t_f * t_f;
}

double fluid_heat_capacity(double t_f) {
  check_fluid_range("fluid_heat_capacity", t_f);
  return 1552.049 + 2.38501 * t_f + 0.0010558 * t_f * t_f;
}

FluidSample fluid_sample(double t_f) {
  return {t_f, fluid_density(t_f), fluid_heat_capacity(t_f)};
}

double volumetric_heat_capacity(double t_f) {
  return fluid_density(t_f) * fluid_heat_capacity(t_f);
}

double thermal_loss_coeff(double t_f, double t_a) {
  const double dt = t_f - t_a;
  if (!(dt > 0.0)) {
    throw DomainError("thermal_loss_coeff: fluid temperature must exceed ambient (dT = " +
                      std::to_string(dt) + ")");
  }
  return 1.137e-8 * dt * dt * dt - 3.235e-6 * dt * dt + 1.444e-4 * dt + 8.179e-2 -
         4.796 / dt;
}

double bounded_loss_coeff(double t_f, double t_a) {
  if (!(t_f > t_a)) return 0.0;
  return std::max(0.0, thermal_loss_coeff(t_f, t_a));
}

double convective_coeff(double flow_m3_per_h, double t_f) {
  if (!(flow_m3_per_h >= 0.0)) {
    throw DomainError("convective_coeff: negative flow " + std::to_string(flow_m3_per_h));
  }
  check_fluid_range("convective_coeff", t_f);
  const auto& p = kConvectivePolynomial;
  const double poly = (((p.c4 * t_f + p.c3) * t_f + p.c2) * t_f + p.c1) * t_f + p.c0;
  return std::pow(flow_m3_per_h / 3600.0, 0.8) * poly;
}

double geometric_efficiency(double latitude, double declination, double hour_angle) {
  if (!(latitude >= -90.0 && latitude <= 90.0)) {
    throw DomainError("geometric_efficiency: latitude outside [-90, 90]");
  }
  const double phi = latitude * kDegToRad;
  const double delta = declination * kDegToRad;
  const double omega = hour_angle * kDegToRad;
  const double cd = std::cos(delta);
  const double sw = std::sin(omega);
  const double inner = std::sin(phi) * std::sin(delta) + cd * cd * sw * sw +
                       std::cos(phi) * cd * std::cos(omega);
  return std::clamp(std::sqrt(inner * inner), 0.0, 1.0);
}

SolarAngles solar_angles(int day_of_year, double solar_hour) {
  if (day_of_year < 1 || day_of_year > 366) {
    throw DomainError("solar_angles: day_of_year outside [1, 366]");
  }
  if (!(solar_hour >= 0.0 && solar_hour < 24.0)) {
    throw DomainError("solar_angles: solar_hour outside [0, 24)");
  }
  const double declination =
      23.45 * std::sin(kDegToRad * 360.0 * (284.0 + day_of_year) / 365.0);
  return {declination, 15.0 * (solar_hour - 12.0)};
}

}  // namespace ptc::physics
