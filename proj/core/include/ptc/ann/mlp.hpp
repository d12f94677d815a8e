#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace ptc::ann {

enum class Activation { tanh, linear };

std::string_view to_string(Activation a);
// Throws ConfigError for unknown names.
Activation activation_from_string(std::string_view name);

// Fully connected feed-forward network. layer_sizes lists the input width,
// every hidden width and the output width. Hidden layers share one activation
// and the output layer has its own.
//
// Parameters are flattened layer by layer: the weight matrix (rows = layer
// outputs) in row-major order, then the bias vector.
class Mlp {
 public:
  Mlp() = default;
  // All weights and biases zero.
  explicit Mlp(std::vector<int> layer_sizes, Activation hidden = Activation::tanh,
               Activation output = Activation::linear);

  // Uniform weights in [-1/sqrt(fan_in), 1/sqrt(fan_in)], zero biases.
  static Mlp random(std::vector<int> layer_sizes, std::uint64_t seed,
                    Activation hidden = Activation::tanh, Activation output = Activation::linear);

  const std::vector<int>& layer_sizes() const { return sizes_; }
  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  std::size_t n_layers() const { return weights_.size(); }
  Activation hidden_activation() const { return hidden_; }
  Activation output_activation() const { return output_; }

  Eigen::MatrixXd& weights(std::size_t layer) { return weights_[layer]; }
  const Eigen::MatrixXd& weights(std::size_t layer) const { return weights_[layer]; }
  Eigen::VectorXd& biases(std::size_t layer) { return biases_[layer]; }
  const Eigen::VectorXd& biases(std::size_t layer) const { return biases_[layer]; }

  std::size_t parameter_count() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::Ref<const Eigen::VectorXd>& theta);

  // Throws DomainError on dimension mismatch.
  Eigen::VectorXd forward(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  // One sample per row.
  Eigen::MatrixXd forward_rows(const Eigen::Ref<const Eigen::MatrixXd>& x) const;

  // d output / d parameters at x, written to out (output_size x
  // parameter_count). Also returns the network output.
  Eigen::VectorXd jacobian(const Eigen::Ref<const Eigen::VectorXd>& x,
                           Eigen::Ref<Eigen::MatrixXd> out) const;

 private:
  Activation activation_of(std::size_t layer) const {
    return layer + 1 == weights_.size() ? output_ : hidden_;
  }

  std::vector<int> sizes_;
  std::vector<Eigen::MatrixXd> weights_;
  std::vector<Eigen::VectorXd> biases_;
  Activation hidden_ = Activation::tanh;
  Activation output_ = Activation::linear;
};

}  // namespace ptc::ann
