#include "ptc/ann/lm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptc/errors.hpp"

namespace ptc::ann {

void LmConfig::validate() const {
  if (!(mu0 > 0.0 && mu_increase > 0.0 && mu_decrease > 0.0 && mu_max > 0.0 &&
        min_gradient > 0.0)) {
    throw ConfigError("LmConfig: mu0, mu factors, mu_max and min_gradient must be positive");
  }
  if (!(mu_decrease < 1.0 && 1.0 < mu_increase)) {
    throw ConfigError("LmConfig: need mu_decrease < 1 < mu_increase");
  }
  if (max_epochs < 0 || max_val_checks <= 0) {
    throw ConfigError("LmConfig: max_epochs must be >= 0 and max_val_checks > 0");
  }
  if (chunk_samples == 0) throw ConfigError("LmConfig: chunk_samples must be positive");
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::max_epochs: return "max_epochs";
    case StopReason::min_gradient: return "min_gradient";
    case StopReason::mu_max: return "mu_max";
    case StopReason::validation: return "validation";
  }
  return "unknown";
}

double sum_squared_error(const Mlp& net, const Eigen::Ref<const Eigen::MatrixXd>& x,
                         const Eigen::Ref<const Eigen::MatrixXd>& y) {
  if (x.rows() == 0) return 0.0;
  return (y - net.forward_rows(x)).squaredNorm();
}

NormalEquations accumulate_normal_equations(const Mlp& net, const Eigen::Ref<const Eigen::MatrixXd>& x,
                                            const Eigen::Ref<const Eigen::MatrixXd>& y,
                                            std::size_t chunk_samples) {
  const auto p = static_cast<Eigen::Index>(net.parameter_count());
  const Eigen::Index k = net.output_size();
  if (x.rows() != y.rows() || y.cols() != k) {
    throw DomainError("accumulate_normal_equations: targets do not match the network output");
  }
  NormalEquations ne;
  ne.jtj = Eigen::MatrixXd::Zero(p, p);
  ne.jte = Eigen::VectorXd::Zero(p);

  const auto chunk = static_cast<Eigen::Index>(chunk_samples);
  Eigen::MatrixXd jb(chunk * k, p);
  Eigen::VectorXd eb(chunk * k);
  for (Eigen::Index start = 0; start < x.rows(); start += chunk) {
    const Eigen::Index m = std::min(chunk, x.rows() - start);
    for (Eigen::Index s = 0; s < m; ++s) {
      const Eigen::VectorXd out =
          net.jacobian(x.row(start + s).transpose(), jb.block(s * k, 0, k, p));
      eb.segment(s * k, k) = y.row(start + s).transpose() - out;
    }
    const auto jblk = jb.topRows(m * k);
    const auto eblk = eb.head(m * k);
    ne.jtj.selfadjointView<Eigen::Lower>().rankUpdate(jblk.transpose());
    ne.jte.noalias() += jblk.transpose() * eblk;
    ne.sse += eblk.squaredNorm();
  }
  return ne;
}

bool lm_step(const NormalEquations& ne, double mu, Eigen::VectorXd& delta) {
  Eigen::MatrixXd a = ne.jtj;
  a.diagonal().array() += mu;
  Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>, Eigen::Lower> llt(a);
  if (llt.info() != Eigen::Success) return false;
  delta = llt.solve(ne.jte);
  return delta.allFinite();
}

LmResult lm_train(Mlp net, const TrainingSet& data, const LmConfig& cfg, const LmProgress& progress) {
  cfg.validate();
  if (data.x_train.rows() == 0) throw DegenerateInputError("lm_train: empty training set");
  if (data.x_train.rows() != data.y_train.rows() || data.x_val.rows() != data.y_val.rows()) {
    throw DomainError("lm_train: inputs and targets have different sample counts");
  }
  const bool early_stopping = data.x_val.rows() > 0;

  LmResult result;
  LmHistory& h = result.history;
  Eigen::VectorXd theta = net.parameters();
  NormalEquations ne = accumulate_normal_equations(net, data.x_train, data.y_train, cfg.chunk_samples);
  double mu = cfg.mu0;

  LmEpoch first;
  first.train_sse = ne.sse;
  first.val_sse = early_stopping ? sum_squared_error(net, data.x_val, data.y_val) : 0.0;
  first.mu = mu;
  first.gradient_norm = ne.jte.norm();
  h.epochs.push_back(first);
  if (progress) progress(first);

  Eigen::VectorXd best = theta;
  h.best_val_sse = first.val_sse;
  int val_checks = 0;
  h.stop = StopReason::max_epochs;

  Eigen::VectorXd delta;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    if (ne.jte.norm() < cfg.min_gradient) {
      h.stop = StopReason::min_gradient;
      break;
    }
    bool accepted = false;
    bool any_solve = false;
    double next_sse = 0.0;
    Eigen::VectorXd candidate;
    while (mu <= cfg.mu_max) {
      if (lm_step(ne, mu, delta)) {
        any_solve = true;
        candidate = theta + delta;
        net.set_parameters(candidate);
        next_sse = sum_squared_error(net, data.x_train, data.y_train);
        if (next_sse < ne.sse) {
          accepted = true;
          mu *= cfg.mu_decrease;
          break;
        }
      }
      mu *= cfg.mu_increase;
    }
    if (!accepted) {
      net.set_parameters(theta);
      if (!any_solve) {
        std::ostringstream msg;
        msg << "lm_train: normal equations singular up to mu = " << cfg.mu_max << " at epoch "
            << epoch << " (train SSE " << ne.sse << ", |J^T e| " << ne.jte.norm() << ")";
        throw TrainingError(msg.str());
      }
      h.stop = StopReason::mu_max;
      break;
    }

    theta = std::move(candidate);
    ne = accumulate_normal_equations(net, data.x_train, data.y_train, cfg.chunk_samples);
    LmEpoch rec;
    rec.epoch = epoch;
    rec.train_sse = ne.sse;
    rec.mu = mu;
    rec.gradient_norm = ne.jte.norm();
    if (early_stopping) {
      rec.val_sse = sum_squared_error(net, data.x_val, data.y_val);
      if (rec.val_sse < h.best_val_sse) {
        h.best_val_sse = rec.val_sse;
        h.best_epoch = epoch;
        best = theta;
        val_checks = 0;
      } else {
        ++val_checks;
      }
    } else {
      h.best_epoch = epoch;
      best = theta;
    }
    h.epochs.push_back(rec);
    if (progress) progress(rec);
    if (early_stopping && val_checks >= cfg.max_val_checks) {
      h.stop = StopReason::validation;
      break;
    }
  }

  net.set_parameters(best);
  result.net = std::move(net);
  return result;
}

}  // namespace ptc::ann
