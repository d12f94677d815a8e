#include "ptc/ann/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "ptc/errors.hpp"
#include "ptc/text.hpp"

namespace ptc::ann {

Eigen::VectorXd make_features(const FieldObservation& obs) {
  const std::size_t n = obs.t_out.size();
  if (n == 0 || obs.intercept.size() != n || obs.apertures.size() != n) {
    throw DomainError("make_features: per-loop vectors must be nonempty and equally long");
  }
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::VectorXd x(feature_count(static_cast<int>(n)));
  Eigen::Index k = 0;
  x[k++] = obs.t_in;
  for (double t : obs.t_out) x[k++] = t;
  x[k++] = obs.t_a;
  x[k++] = obs.irradiance_no;
  for (double f : obs.intercept) x[k++] = f;
  x[k++] = x.segment(1, ni).mean();
  x[k++] = x.segment(ni + 3, ni).mean();
  for (double v : obs.apertures) x[k++] = v;
  return x;
}

std::vector<std::string> feature_names(int n_loops) {
  std::vector<std::string> names;
  names.emplace_back("t_in");
  for (int i = 0; i < n_loops; ++i) names.push_back("t_out_" + std::to_string(i));
  names.emplace_back("t_a");
  names.emplace_back("i_no");
  for (int i = 0; i < n_loops; ++i) names.push_back("if_" + std::to_string(i));
  names.emplace_back("t_out_mean");
  names.emplace_back("if_mean");
  for (int i = 0; i < n_loops; ++i) names.push_back("v_" + std::to_string(i));
  return names;
}

std::vector<std::string> target_names(int n_loops) {
  std::vector<std::string> names;
  for (int i = 0; i < n_loops; ++i) names.push_back("v_next_" + std::to_string(i));
  return names;
}

Dataset make_dataset(const std::vector<Sample>& samples) {
  Dataset d;
  if (samples.empty()) return d;
  const Eigen::Index nx = samples.front().x.size();
  const Eigen::Index ny = samples.front().y.size();
  const auto n = static_cast<Eigen::Index>(samples.size());
  d.inputs.resize(n, nx);
  d.targets.resize(n, ny);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Sample& s = samples[static_cast<std::size_t>(r)];
    if (s.x.size() != nx || s.y.size() != ny) {
      throw DomainError("make_dataset: sample " + std::to_string(r) + " has a different width");
    }
    d.inputs.row(r) = s.x.transpose();
    d.targets.row(r) = s.y.transpose();
    d.run_id.push_back(s.run_id);
    d.tick.push_back(s.tick);
  }
  return d;
}

void split_dataset(Dataset& d, std::uint64_t seed, double train_fraction, double validation_fraction) {
  if (!(train_fraction > 0.0 && validation_fraction >= 0.0 &&
        train_fraction + validation_fraction <= 1.0)) {
    throw ConfigError("split_dataset: fractions must be nonnegative and sum to at most 1");
  }
  const std::size_t n = d.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Fisher-Yates by hand: std::shuffle's draw pattern is library specific.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  const auto n_val = std::min(
      n - n_train, static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(n))));
  d.split_seed = seed;
  d.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  d.validation.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                      idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  d.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), idx.end());
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = m.row(static_cast<Eigen::Index>(idx[r]));
  }
  return out;
}

void save_dataset_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write dataset to " + path.string());
  const int n_loops = static_cast<int>(d.targets.cols());
  out << "run_id,tick";
  for (const auto& name : feature_names(n_loops)) out << ',' << name;
  for (const auto& name : target_names(n_loops)) out << ',' << name;
  out << '\n';
  for (Eigen::Index r = 0; r < d.inputs.rows(); ++r) {
    out << d.run_id[static_cast<std::size_t>(r)] << ',' << d.tick[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < d.inputs.cols(); ++c) out << ',' << text::format_double(d.inputs(r, c));
    for (Eigen::Index c = 0; c < d.targets.cols(); ++c) out << ',' << text::format_double(d.targets(r, c));
    out << '\n';
  }
  if (!out) throw IngestionError("write failed for " + path.string());
}

Dataset load_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open dataset " + path.string());
  std::string line;
  long line_no = 1;
  if (!std::getline(in, line)) throw IngestionError(path.string() + ": empty file", 1);
  const auto header = text::split(text::trim(line), ',');
  // 2 id columns + (3n + 5) features + n targets.
  const long width = static_cast<long>(header.size());
  if (width < 2 + 9 || (width - 7) % 4 != 0 || header[0] != "run_id" || header[1] != "tick") {
    throw IngestionError(path.string() + ": unexpected header", 1);
  }
  const int n_loops = static_cast<int>((width - 7) / 4);
  std::vector<std::string> expected = {"run_id", "tick"};
  for (auto& s : feature_names(n_loops)) expected.push_back(std::move(s));
  for (auto& s : target_names(n_loops)) expected.push_back(std::move(s));
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (text::trim(header[c]) != expected[c]) {
      throw IngestionError(path.string() + ": header column " + std::to_string(c + 1) + " should be '" +
                               expected[c] + "'",
                           1);
    }
  }

  const int nx = feature_count(n_loops);
  std::vector<Sample> samples;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(text::trim(line), ',');
    if (static_cast<long>(fields.size()) != width) {
      throw IngestionError(path.string() + ": expected " + std::to_string(width) + " fields, got " +
                               std::to_string(fields.size()),
                           line_no);
    }
    Sample s;
    const auto run = text::parse_int(fields[0]);
    const auto tick = text::parse_int(fields[1]);
    if (!run || !tick) throw IngestionError(path.string() + ": bad run_id or tick", line_no);
    s.run_id = static_cast<int>(*run);
    s.tick = static_cast<int>(*tick);
    s.x.resize(nx);
    s.y.resize(n_loops);
    for (long c = 2; c < width; ++c) {
      const auto v = text::parse_double(fields[static_cast<std::size_t>(c)]);
      if (!v) {
        throw IngestionError(path.string() + ": column '" + expected[static_cast<std::size_t>(c)] +
                                 "' is not a number",
                             line_no);
      }
      if (c - 2 < nx) {
        s.x[c - 2] = *v;
      } else {
        s.y[c - 2 - nx] = *v;
      }
    }
    samples.push_back(std::move(s));
  }
  Dataset d = make_dataset(samples);
  if (samples.empty()) {
    d.inputs.resize(0, nx);
    d.targets.resize(0, n_loops);
  }
  return d;
}

}  // namespace ptc::ann
