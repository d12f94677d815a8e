#pragma once

// Independent reference computations shared by the unit and acceptance
// tests. Nothing here calls into the library's numerics beyond reading its
// public state.

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "ptc/ann/mlp.hpp"
#include "ptc/models.hpp"

namespace ptc::oracle {

// Fluid property fits, degC in.
inline double rho(double t) { return 1061.5 - 0.5787 * t - 9.0242e-4 * t * t; }
inline double cp(double t) { return 1552.049 + 2.38501 * t + 0.0010558 * t * t; }
// Loss coefficient, clipped at zero and off without a positive gradient.
inline double hl(double tf, double ta) {
  const double d = tf - ta;
  if (d <= 0.0) return 0.0;
  return std::max(0.0, 1.137e-8 * d * d * d - 3.235e-6 * d * d + 1.444e-4 * d + 8.179e-2 - 4.796 / d);
}

struct Budget {
  double stored;  // energy change over the step, J
  double inputs;  // dt * (absorbed + ambient exchange + net advection)
  double scale;   // magnitude of the largest term
};

// Energy accounting of one distributed step a -> b using only public state.
inline Budget energy_budget(const models::LoopParams& p, const models::SegmentLayout& l,
                            const models::DistributedState& a, const models::DistributedState& b,
                            double t_a, double dni, double n_o, const std::array<double, 4>& f,
                            double t_in, double dt) {
  const double dx = l.segment_length;
  const double mc = p.metal.density * p.metal.heat_capacity * p.metal.cross_section;
  double stored = 0.0, absorbed = 0.0, ambient = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < l.n_segments; ++i) {
    const double tf = a.t_fluid[i], tm = a.t_metal[i];
    const double fluid = rho(tf) * cp(tf) * p.fluid_cross_section * dx * (b.t_fluid[i] - tf);
    const double metal = mc * dx * (b.t_metal[i] - tm);
    stored += fluid + metal;
    scale = std::max({scale, std::abs(fluid), std::abs(metal)});
    const int c = l.collector[i];
    if (c >= 0) absorbed += dx * f[static_cast<std::size_t>(c)] * p.alpha_kopt * n_o * p.collector_aperture *
                            p.optical_efficiency * dni;
    ambient += dx * (2.0 - p.alpha_hl) * hl(tm, t_a) * p.collector_aperture * (t_a - tm);
  }
  const double t_out = a.t_fluid.back();
  const double advection = a.q * (rho(t_in) * cp(t_in) * t_in - rho(t_out) * cp(t_out) * t_out);
  const double inputs = dt * (absorbed + ambient + advection);
  scale = std::max({scale, dt * std::abs(absorbed), dt * std::abs(ambient), dt * std::abs(advection)});
  return {stored, inputs, scale};
}

// Largest element difference between the analytic Jacobian and central
// differences of the forward pass.
inline double jacobian_fd_error(const ann::Mlp& net, const Eigen::VectorXd& x, double eps = 1e-5) {
  Eigen::MatrixXd j(net.output_size(), static_cast<Eigen::Index>(net.parameter_count()));
  net.jacobian(x, j);
  const Eigen::VectorXd theta = net.parameters();
  ann::Mlp probe = net;
  double worst = 0.0;
  for (Eigen::Index p = 0; p < theta.size(); ++p) {
    Eigen::VectorXd t = theta;
    t(p) += eps;
    probe.set_parameters(t);
    const Eigen::VectorXd up = probe.forward(x);
    t(p) -= 2.0 * eps;
    probe.set_parameters(t);
    const Eigen::VectorXd down = probe.forward(x);
    worst = std::max(worst, ((up - down) / (2.0 * eps) - j.col(p)).cwiseAbs().maxCoeff());
  }
  return worst;
}

// Affine least squares y ~ x w + b by pivoted QR. Returns (w, b).
inline Eigen::VectorXd affine_least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::MatrixXd a(x.rows(), x.cols() + 1);
  a << x, Eigen::VectorXd::Ones(x.rows());
  return a.colPivHouseholderQr().solve(y);
}

}  // namespace ptc::oracle
