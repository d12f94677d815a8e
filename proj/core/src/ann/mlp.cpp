#include "ptc/ann/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ptc/errors.hpp"

namespace ptc::ann {
namespace {

void apply(Activation a, Eigen::Ref<Eigen::MatrixXd> z) {
  if (a == Activation::tanh) z = z.array().tanh().matrix();
}

// Derivative expressed through the activation value.
Eigen::VectorXd derivative_from_output(Activation a, const Eigen::VectorXd& y) {
  if (a == Activation::tanh) return (1.0 - y.array().square()).matrix();
  return Eigen::VectorXd::Ones(y.size());
}

}  // namespace

std::string_view to_string(Activation a) {
  return a == Activation::tanh ? "tanh" : "linear";
}

Activation activation_from_string(std::string_view name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "linear") return Activation::linear;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

Mlp::Mlp(std::vector<int> layer_sizes, Activation hidden, Activation output)
    : sizes_(std::move(layer_sizes)), hidden_(hidden), output_(output) {
  if (sizes_.size() < 2) throw DomainError("Mlp: need at least input and output sizes");
  for (int s : sizes_) {
    if (s <= 0) throw DomainError("Mlp: layer sizes must be positive");
  }
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    weights_.emplace_back(Eigen::MatrixXd::Zero(sizes_[l + 1], sizes_[l]));
    biases_.emplace_back(Eigen::VectorXd::Zero(sizes_[l + 1]));
  }
}

Mlp Mlp::random(std::vector<int> layer_sizes, std::uint64_t seed, Activation hidden,
                Activation output) {
  Mlp net(std::move(layer_sizes), hidden, output);
  std::mt19937_64 rng(seed);
  for (auto& w : net.weights_) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
    }
  }
  return net;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    n += static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
  }
  return n;
}

Eigen::VectorXd Mlp::parameters() const {
  Eigen::VectorXd theta(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const auto& w = weights_[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      theta.segment(off, w.cols()) = w.row(r).transpose();
      off += w.cols();
    }
    theta.segment(off, biases_[l].size()) = biases_[l];
    off += biases_[l].size();
  }
  return theta;
}

void Mlp::set_parameters(const Eigen::Ref<const Eigen::VectorXd>& theta) {
  if (static_cast<std::size_t>(theta.size()) != parameter_count()) {
    throw DomainError("Mlp::set_parameters: expected " + std::to_string(parameter_count()) +
                      " parameters, got " + std::to_string(theta.size()));
  }
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    auto& w = weights_[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      w.row(r) = theta.segment(off, w.cols()).transpose();
      off += w.cols();
    }
    biases_[l] = theta.segment(off, biases_[l].size());
    off += biases_[l].size();
  }
}

Eigen::VectorXd Mlp::forward(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != input_size()) {
    throw DomainError("Mlp::forward: input has " + std::to_string(x.size()) +
                      " features, network expects " + std::to_string(input_size()));
  }
  Eigen::VectorXd a = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::VectorXd z = weights_[l] * a + biases_[l];
    apply(activation_of(l), z);
    a = std::move(z);
  }
  return a;
}

Eigen::MatrixXd Mlp::forward_rows(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  if (x.cols() != input_size()) throw DomainError("Mlp::forward_rows: input width mismatch");
  Eigen::MatrixXd a = x;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    Eigen::MatrixXd z = a * weights_[l].transpose();
    z.rowwise() += biases_[l].transpose();
    apply(activation_of(l), z);
    a = std::move(z);
  }
  return a;
}

Eigen::VectorXd Mlp::jacobian(const Eigen::Ref<const Eigen::VectorXd>& x,
                              Eigen::Ref<Eigen::MatrixXd> out) const {
  if (x.size() != input_size()) throw DomainError("Mlp::jacobian: input width mismatch");
  if (out.rows() != output_size() || static_cast<std::size_t>(out.cols()) != parameter_count()) {
    throw DomainError("Mlp::jacobian: output block has the wrong shape");
  }
  const std::size_t n = weights_.size();
  std::vector<Eigen::VectorXd> act(n + 1);
  act[0] = x;
  for (std::size_t l = 0; l < n; ++l) {
    Eigen::VectorXd z = weights_[l] * act[l] + biases_[l];
    apply(activation_of(l), z);
    act[l + 1] = std::move(z);
  }

  // Offsets of each layer's block in the flattened parameter vector.
  std::vector<Eigen::Index> offset(n);
  Eigen::Index off = 0;
  for (std::size_t l = 0; l < n; ++l) {
    offset[l] = off;
    off += weights_[l].size() + biases_[l].size();
  }

  // delta rows: one per network output, columns = units of the current layer.
  Eigen::MatrixXd delta = derivative_from_output(output_, act[n]).asDiagonal();
  for (std::size_t l = n; l-- > 0;) {
    const auto& a_prev = act[l];
    const Eigen::Index in = weights_[l].cols();
    const Eigen::Index units = weights_[l].rows();
    for (Eigen::Index r = 0; r < units; ++r) {
      out.block(0, offset[l] + r * in, out.rows(), in).noalias() = delta.col(r) * a_prev.transpose();
    }
    out.block(0, offset[l] + units * in, out.rows(), units) = delta;
    if (l > 0) {
      const Eigen::VectorXd d = derivative_from_output(hidden_, act[l]);
      delta = (delta * weights_[l]) * d.asDiagonal();
    }
  }
  return act[n];
}

}  // namespace ptc::ann
