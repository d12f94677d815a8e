#pragma once

#include <Eigen/Dense>

namespace ptc::ann {

// Per-feature affine map of [min, max] onto [-1, 1].
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  // Throws DomainError unless min < max elementwise.
  MinMaxScaler(Eigen::VectorXd min, Eigen::VectorXd max);

  // One sample per row. A constant column gets the range [v - 1, v + 1] so
  // it maps to zero instead of dividing by zero.
  static MinMaxScaler fit(const Eigen::Ref<const Eigen::MatrixXd>& rows);

  Eigen::Index size() const { return min_.size(); }
  const Eigen::VectorXd& min() const { return min_; }
  const Eigen::VectorXd& max() const { return max_; }

  Eigen::VectorXd scale(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd unscale(const Eigen::Ref<const Eigen::VectorXd>& y) const;
  Eigen::MatrixXd scale_rows(const Eigen::Ref<const Eigen::MatrixXd>& x) const;
  Eigen::MatrixXd unscale_rows(const Eigen::Ref<const Eigen::MatrixXd>& y) const;

 private:
  Eigen::VectorXd min_;
  Eigen::VectorXd max_;
};

}  // namespace ptc::ann
