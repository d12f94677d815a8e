#pragma once

// Correlations for the heat transfer fluid (Therminol VP-1), receiver heat
// transfer and the geometric efficiency of a north-south tracking trough.
// Temperatures are in degrees Celsius throughout.

namespace ptc::physics {

inline constexpr double kMinFluidTemperature = 0.0;
inline constexpr double kMaxFluidTemperature = 450.0;

struct FluidSample {
  double temperature;    // degC
  double density;        // kg/m^3
  double heat_capacity;  // J/(kg degC)
};

// Quadratic density fit, valid on [0, 450] degC. Throws DomainError outside.
double fluid_density(double t_f);

// Quadratic specific heat fit, valid on [0, 450] degC.
double fluid_heat_capacity(double t_f);

FluidSample fluid_sample(double t_f);

// rho_f * C_f in J/(m^3 degC).
double volumetric_heat_capacity(double t_f);

// Receiver thermal loss coefficient H_l in W/(m^2 degC), as a function of the
// fluid-to-ambient temperature difference. The last term divides by
// (t_f - t_a), so t_f <= t_a throws DomainError. The fit turns negative for
// differences below roughly 58 degC; it is only meaningful for large
// differences.
double thermal_loss_coeff(double t_f, double t_a);

// H_l clamped to be non-negative, and zero when the fluid is not hotter than
// ambient. Continuous in t_f. This is what the plant models use.
double bounded_loss_coeff(double t_f, double t_a);

// Quartic part of the inner-tube convective coefficient, highest power first.
// The cubic coefficient is printed as -1.356114e3 in the source correlation;
// that reading makes the coefficient hugely negative at every operating
// temperature, so the table carries -1.356114e-3.
struct ConvectivePolynomial {
  double c4 = -7.182817e-7;
  double c3 = -1.356114e-3;
  double c2 = 2.679214e-1;
  double c1 = 479.1142;
  double c0 = 5.011334e3;
};
inline constexpr ConvectivePolynomial kConvectivePolynomial{};

// H_t = (q/3600)^0.8 * poly(t_f) in W/(m^2 degC). The 3600 divisor converts
// a per-hour flow, so the argument is the loop flow in m^3/h (callers holding
// m^3/s multiply by 3600). Throws DomainError for negative flow or t_f outside
// [0, 450].
double convective_coeff(double flow_m3_per_h, double t_f);

// Geometric efficiency n_o of a north-south oriented collector. Angles in
// degrees. Result clamped to [0, 1].
double geometric_efficiency(double latitude, double declination,
                            double hour_angle);

struct SolarAngles {
  double declination;  // deg
  double hour_angle;   // deg
};

// Cooper declination and a 15 deg/h hour angle.
SolarAngles solar_angles(int day_of_year, double solar_hour);

}  // namespace ptc::physics
