#include "ptc/ann/imitation.hpp"

#include <algorithm>
#include <cmath>

#include "ptc/errors.hpp"

namespace ptc::ann {
namespace {

double pearson(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  if (a.size() < 2) return 0.0;
  const Eigen::ArrayXd da = a - a.mean();
  const Eigen::ArrayXd db = b - b.mean();
  const double denom = std::sqrt(da.square().sum() * db.square().sum());
  return denom > 0.0 ? (da * db).sum() / denom : 0.0;
}

}  // namespace

std::vector<double> infer_apertures(const ImitationModel& model, const FieldObservation& obs,
                                    InferenceDiagnostics* diag) {
  const Eigen::VectorXd raw = make_features(obs);
  Eigen::VectorXd x = model.inputs.scale(raw);
  int clamped = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < -1.0 || x[i] > 1.0) {
      x[i] = std::clamp(x[i], -1.0, 1.0);
      ++clamped;
    }
  }
  if (diag) diag->clamped_features = clamped;

  const Eigen::VectorXd y = model.outputs.unscale(model.net.forward(x));
  std::vector<double> v(static_cast<std::size_t>(y.size()));
  double top = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double yi = y[static_cast<Eigen::Index>(i)];
    v[i] = std::isfinite(yi) ? std::clamp(yi, kMinAperture, 1.0) : 1.0;
    top = std::max(top, v[i]);
  }
  for (double& vi : v) vi /= top;
  return v;
}

FitQuality evaluate(const ImitationModel& model, const Dataset& data, const std::vector<std::size_t>& rows) {
  FitQuality q;
  if (rows.empty()) return q;
  const Eigen::MatrixXd x = model.inputs.scale_rows(select_rows(data.inputs, rows));
  const Eigen::MatrixXd y = model.outputs.scale_rows(select_rows(data.targets, rows));
  const Eigen::MatrixXd p = model.net.forward_rows(x);
  q.mse = (p - y).squaredNorm() / static_cast<double>(y.size());
  q.r_pooled = pearson(p.reshaped().array(), y.reshaped().array());
  for (Eigen::Index c = 0; c < y.cols(); ++c) {
    q.r_per_output.push_back(pearson(p.col(c).array(), y.col(c).array()));
  }
  return q;
}

ImitationModel train_imitation(const Dataset& data, const ImitationConfig& cfg, TrainingReport* report,
                               const LmProgress& progress) {
  if (data.train.empty()) throw DegenerateInputError("train_imitation: dataset has no training split");
  ImitationModel model;
  model.seed = cfg.seed;
  const Eigen::MatrixXd x_train = select_rows(data.inputs, data.train);
  const Eigen::MatrixXd y_train = select_rows(data.targets, data.train);
  model.inputs = MinMaxScaler::fit(x_train);
  model.outputs = MinMaxScaler::fit(y_train);

  std::vector<int> sizes;
  sizes.push_back(static_cast<int>(data.inputs.cols()));
  sizes.insert(sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
  sizes.push_back(static_cast<int>(data.targets.cols()));
  Mlp net = Mlp::random(sizes, cfg.seed);

  TrainingSet ts;
  ts.x_train = model.inputs.scale_rows(x_train);
  ts.y_train = model.outputs.scale_rows(y_train);
  ts.x_val = model.inputs.scale_rows(select_rows(data.inputs, data.validation));
  ts.y_val = model.outputs.scale_rows(select_rows(data.targets, data.validation));
  LmResult fit = lm_train(std::move(net), ts, cfg.lm, progress);
  model.net = std::move(fit.net);

  if (report) {
    report->history = std::move(fit.history);
    report->train = evaluate(model, data, data.train);
    report->validation = evaluate(model, data, data.validation);
    report->test = evaluate(model, data, data.test);
  }
  return model;
}

}  // namespace ptc::ann
