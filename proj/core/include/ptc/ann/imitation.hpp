#pragma once

#include <cstdint>
#include <vector>

#include "ptc/ann/dataset.hpp"
#include "ptc/ann/lm.hpp"
#include "ptc/ann/mlp.hpp"
#include "ptc/ann/scaler.hpp"

namespace ptc::ann {

inline constexpr double kMinAperture = 0.01;

// A trained allocator surrogate: network plus the scalers fitted on its
// training split.
struct ImitationModel {
  Mlp net;
  MinMaxScaler inputs;
  MinMaxScaler outputs;
  std::uint64_t seed = 0;
};

struct InferenceDiagnostics {
  int clamped_features = 0;  // inputs outside the training range
};

// scale -> forward -> unscale -> clamp to [0.01, 1] -> renormalise so the
// largest aperture is 1.
std::vector<double> infer_apertures(const ImitationModel& model, const FieldObservation& obs,
                                    InferenceDiagnostics* diag = nullptr);

struct FitQuality {
  double mse = 0.0;  // on scaled targets
  double r_pooled = 0.0;
  std::vector<double> r_per_output;
};

struct TrainingReport {
  LmHistory history;
  FitQuality train, validation, test;
};

struct ImitationConfig {
  std::vector<int> hidden = {50, 25, 10};
  std::uint64_t seed = 0;  // weight initialisation
  LmConfig lm;
};

// Dataset must already be split. Scalers are fit on the training rows only.
ImitationModel train_imitation(const Dataset& data, const ImitationConfig& cfg,
                               TrainingReport* report = nullptr, const LmProgress& progress = {});

// Evaluated on the scaled targets of the given rows.
FitQuality evaluate(const ImitationModel& model, const Dataset& data, const std::vector<std::size_t>& rows);

}  // namespace ptc::ann
