#include "ptc/ann/model_io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ptc/errors.hpp"
#include "ptc/text.hpp"

namespace ptc::ann {
namespace {

constexpr std::string_view kMagic = "ptc-mlp 1";

void write_values(std::ostream& out, const double* v, Eigen::Index n) {
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i) out << ' ';
    out << text::format_double(v[i]);
  }
  out << '\n';
}

void write_vector(std::ostream& out, std::string_view key, const Eigen::VectorXd& v) {
  out << key << ' ';
  write_values(out, v.data(), v.size());
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next non-empty line split on whitespace.
  std::vector<std::string> tokens() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      std::istringstream ss(line);
      std::vector<std::string> out;
      std::string tok;
      while (ss >> tok) out.push_back(tok);
      if (!out.empty()) return out;
    }
    fail("unexpected end of file");
  }

  std::vector<std::string> keyed(std::string_view key, std::size_t min_tokens) {
    auto t = tokens();
    if (t.front() != key) fail("expected '" + std::string(key) + "', found '" + t.front() + "'");
    if (t.size() < min_tokens) fail("too few fields after '" + std::string(key) + "'");
    return t;
  }

  double number(const std::string& s) {
    const auto v = text::parse_double(s);
    if (!v) fail("'" + s + "' is not a number");
    return *v;
  }

  long long integer(const std::string& s) {
    const auto v = text::parse_int(s);
    if (!v) fail("'" + s + "' is not an integer");
    return *v;
  }

  Eigen::VectorXd values(const std::vector<std::string>& t, std::size_t first, Eigen::Index expect) {
    if (static_cast<Eigen::Index>(t.size() - first) != expect) {
      fail("expected " + std::to_string(expect) + " values, found " + std::to_string(t.size() - first));
    }
    Eigen::VectorXd v(expect);
    for (Eigen::Index i = 0; i < expect; ++i) v[i] = number(t[first + static_cast<std::size_t>(i)]);
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw IngestionError("model file line " + std::to_string(line_) + ": " + what, line_);
  }

  std::istream& in_;
  long line_ = 0;
};

}  // namespace

void write_model(std::ostream& out, const ImitationModel& model) {
  const Mlp& net = model.net;
  out << kMagic << '\n';
  out << "layers";
  for (int s : net.layer_sizes()) out << ' ' << s;
  out << '\n';
  out << "hidden_activation " << to_string(net.hidden_activation()) << '\n';
  out << "output_activation " << to_string(net.output_activation()) << '\n';
  out << "seed " << model.seed << '\n';
  write_vector(out, "input_min", model.inputs.min());
  write_vector(out, "input_max", model.inputs.max());
  write_vector(out, "output_min", model.outputs.min());
  write_vector(out, "output_max", model.outputs.max());
  for (std::size_t l = 0; l < net.n_layers(); ++l) {
    const auto& w = net.weights(l);
    out << "weights " << l << ' ' << w.rows() << ' ' << w.cols() << '\n';
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      const Eigen::VectorXd row = w.row(r).transpose();
      write_values(out, row.data(), row.size());
    }
    out << "biases " << l << ' ' << net.biases(l).size() << '\n';
    write_values(out, net.biases(l).data(), net.biases(l).size());
  }
  out << "end\n";
}

ImitationModel read_model(std::istream& in) {
  Reader r(in);
  {
    std::string line;
    if (!std::getline(in, line) || text::trim(line) != kMagic) {
      r.line_ = 1;
      r.fail("not a ptc-mlp model file");
    }
    r.line_ = 1;
  }
  auto t = r.keyed("layers", 3);
  std::vector<int> sizes;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const long long s = r.integer(t[i]);
    if (s <= 0 || s > 1'000'000) r.fail("layer size out of range");
    sizes.push_back(static_cast<int>(s));
  }
  Activation hidden{};
  Activation output{};
  try {
    hidden = activation_from_string(r.keyed("hidden_activation", 2)[1]);
    output = activation_from_string(r.keyed("output_activation", 2)[1]);
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
  ImitationModel model;
  const auto seed_tok = r.keyed("seed", 2)[1];
  try {
    model.seed = std::stoull(seed_tok);
  } catch (const std::exception&) {
    r.fail("bad seed '" + seed_tok + "'");
  }
  const Eigen::Index nx = sizes.front();
  const Eigen::Index ny = sizes.back();
  Eigen::VectorXd in_min = r.values(r.keyed("input_min", 1), 1, nx);
  Eigen::VectorXd in_max = r.values(r.keyed("input_max", 1), 1, nx);
  Eigen::VectorXd out_min = r.values(r.keyed("output_min", 1), 1, ny);
  Eigen::VectorXd out_max = r.values(r.keyed("output_max", 1), 1, ny);
  try {
    model.inputs = MinMaxScaler(std::move(in_min), std::move(in_max));
    model.outputs = MinMaxScaler(std::move(out_min), std::move(out_max));
  } catch (const DomainError& e) {
    r.fail(e.what());
  }

  model.net = Mlp(sizes, hidden, output);
  for (std::size_t l = 0; l < model.net.n_layers(); ++l) {
    auto& w = model.net.weights(l);
    t = r.keyed("weights", 4);
    if (r.integer(t[1]) != static_cast<long long>(l) || r.integer(t[2]) != w.rows() ||
        r.integer(t[3]) != w.cols()) {
      r.fail("weight block header does not match the layer sizes");
    }
    for (Eigen::Index row = 0; row < w.rows(); ++row) {
      w.row(row) = r.values(r.tokens(), 0, w.cols()).transpose();
    }
    t = r.keyed("biases", 3);
    if (r.integer(t[1]) != static_cast<long long>(l) || r.integer(t[2]) != w.rows()) {
      r.fail("bias block header does not match the layer sizes");
    }
    model.net.biases(l) = r.values(r.tokens(), 0, w.rows());
  }
  r.keyed("end", 1);
  return model;
}

void save_model(const ImitationModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write model to " + path.string());
  write_model(out, model);
  if (!out) throw IngestionError("write failed for " + path.string());
}

ImitationModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open model file " + path.string());
  return read_model(in);
}

}  // namespace ptc::ann
