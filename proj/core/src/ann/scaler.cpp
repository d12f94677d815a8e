#include "ptc/ann/scaler.hpp"

#include <cmath>
#include <string>

#include "ptc/errors.hpp"

namespace ptc::ann {

MinMaxScaler::MinMaxScaler(Eigen::VectorXd min, Eigen::VectorXd max)
    : min_(std::move(min)), max_(std::move(max)) {
  if (min_.size() != max_.size()) throw DomainError("MinMaxScaler: min/max size mismatch");
  for (Eigen::Index i = 0; i < min_.size(); ++i) {
    if (!(std::isfinite(min_[i]) && std::isfinite(max_[i]) && min_[i] < max_[i])) {
      throw DomainError("MinMaxScaler: feature " + std::to_string(i) + " needs min < max");
    }
  }
}

MinMaxScaler MinMaxScaler::fit(const Eigen::Ref<const Eigen::MatrixXd>& rows) {
  if (rows.rows() == 0) throw DegenerateInputError("MinMaxScaler::fit: no samples");
  Eigen::VectorXd lo = rows.colwise().minCoeff().transpose();
  Eigen::VectorXd hi = rows.colwise().maxCoeff().transpose();
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i])) {
      lo[i] -= 1.0;
      hi[i] += 1.0;
    }
  }
  return MinMaxScaler(std::move(lo), std::move(hi));
}

Eigen::VectorXd MinMaxScaler::scale(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != size()) throw DomainError("MinMaxScaler::scale: size mismatch");
  return (2.0 * (x - min_).array() / (max_ - min_).array() - 1.0).matrix();
}

Eigen::VectorXd MinMaxScaler::unscale(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  if (y.size() != size()) throw DomainError("MinMaxScaler::unscale: size mismatch");
  return ((y.array() + 1.0) * 0.5 * (max_ - min_).array() + min_.array()).matrix();
}

Eigen::MatrixXd MinMaxScaler::scale_rows(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
  if (x.cols() != size()) throw DomainError("MinMaxScaler::scale_rows: width mismatch");
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out.row(r) = scale(x.row(r).transpose()).transpose();
  return out;
}

Eigen::MatrixXd MinMaxScaler::unscale_rows(const Eigen::Ref<const Eigen::MatrixXd>& y) const {
  if (y.cols() != size()) throw DomainError("MinMaxScaler::unscale_rows: width mismatch");
  Eigen::MatrixXd out(y.rows(), y.cols());
  for (Eigen::Index r = 0; r < y.rows(); ++r) out.row(r) = unscale(y.row(r).transpose()).transpose();
  return out;
}

}  // namespace ptc::ann
