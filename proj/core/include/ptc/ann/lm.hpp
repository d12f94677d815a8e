#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ptc/ann/mlp.hpp"

namespace ptc::ann {

struct LmConfig {
  double mu0 = 1e-3;
  double mu_increase = 10.0;
  double mu_decrease = 0.1;
  double mu_max = 1e10;
  int max_epochs = 4000;
  double min_gradient = 1e-7;
  int max_val_checks = 6;
  // Samples per block when accumulating J^T J; bounds the Jacobian memory to
  // chunk_samples * outputs * parameters doubles.
  std::size_t chunk_samples = 256;

  void validate() const;
};

// Inputs and targets hold one sample per row. An empty validation set turns
// early stopping off.
struct TrainingSet {
  Eigen::MatrixXd x_train, y_train;
  Eigen::MatrixXd x_val, y_val;
};

enum class StopReason { max_epochs, min_gradient, mu_max, validation };
std::string_view to_string(StopReason r);

struct LmEpoch {
  int epoch = 0;
  double train_sse = 0.0;
  double val_sse = 0.0;
  double mu = 0.0;
  double gradient_norm = 0.0;
};

struct LmHistory {
  std::vector<LmEpoch> epochs;  // entry 0 is the initial network
  StopReason stop = StopReason::max_epochs;
  int best_epoch = 0;
  double best_val_sse = 0.0;
};

struct LmResult {
  Mlp net;
  LmHistory history;
};

// Gauss-Newton system of the sum of squared errors: J^T J (lower triangle
// filled) and J^T e with e = y - f(x).
struct NormalEquations {
  Eigen::MatrixXd jtj;
  Eigen::VectorXd jte;
  double sse = 0.0;
};

NormalEquations accumulate_normal_equations(const Mlp& net, const Eigen::Ref<const Eigen::MatrixXd>& x,
                                            const Eigen::Ref<const Eigen::MatrixXd>& y,
                                            std::size_t chunk_samples);

// Solves (J^T J + mu I) delta = J^T e. Returns false if the damped matrix is
// not numerically positive definite.
bool lm_step(const NormalEquations& ne, double mu, Eigen::VectorXd& delta);

double sum_squared_error(const Mlp& net, const Eigen::Ref<const Eigen::MatrixXd>& x,
                         const Eigen::Ref<const Eigen::MatrixXd>& y);

using LmProgress = std::function<void(const LmEpoch&)>;

// Throws TrainingError if the normal equations stay singular up to mu_max and
// DegenerateInputError on an empty training set.
LmResult lm_train(Mlp net, const TrainingSet& data, const LmConfig& cfg,
                  const LmProgress& progress = {});

}  // namespace ptc::ann
