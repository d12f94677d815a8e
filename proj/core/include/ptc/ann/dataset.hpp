#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ptc::ann {

inline constexpr int kFieldLoops = 10;

// Width of the controller input vector for n loops: inlet temperature, n
// outlets, ambient, I * n_o, n intercept factors, mean outlet, mean intercept
// factor and n current apertures.
constexpr int feature_count(int n_loops) { return 3 * n_loops + 5; }

// What the field controller sees at one tick.
struct FieldObservation {
  double t_in = 0.0;
  double t_a = 0.0;
  double irradiance_no = 0.0;  // DNI times geometric efficiency, W/m^2
  std::vector<double> t_out;
  std::vector<double> intercept;
  std::vector<double> apertures;
};

// Throws DomainError if the per-loop vectors differ in length or are empty.
Eigen::VectorXd make_features(const FieldObservation& obs);

std::vector<std::string> feature_names(int n_loops);
std::vector<std::string> target_names(int n_loops);

struct Sample {
  int run_id = 0;
  int tick = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

// Inputs and targets hold one sample per row.
struct Dataset {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd targets;
  std::vector<int> run_id;
  std::vector<int> tick;

  std::uint64_t split_seed = 0;
  std::vector<std::size_t> train, validation, test;

  std::size_t size() const { return static_cast<std::size_t>(inputs.rows()); }
  int n_loops() const { return static_cast<int>(targets.cols()); }
};

// Throws DomainError if the samples disagree on widths.
Dataset make_dataset(const std::vector<Sample>& samples);

// Shuffles sample indices with the seed and cuts them into train /
// validation / test with the given fractions (test gets the rest).
void split_dataset(Dataset& d, std::uint64_t seed, double train_fraction = 0.70,
                   double validation_fraction = 0.15);

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx);

// CSV with header run_id,tick,<features>,<targets>. Values are written in
// shortest round-trip form so load(save(d)) reproduces d exactly (splits are
// not stored).
void save_dataset_csv(const Dataset& d, const std::filesystem::path& path);
// Throws IngestionError with the 1-based line number on malformed input.
Dataset load_dataset_csv(const std::filesystem::path& path);

}  // namespace ptc::ann
