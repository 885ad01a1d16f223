#include "asrsel/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asrsel/checksum.hpp"
#include "asrsel/error.hpp"
#include "asrsel/io.hpp"
#include "asrsel/random.hpp"

namespace asrsel {

std::string_view to_string(WerClass label) { return label == WerClass::kLow ? "LOW" : "HIGH"; }

WerClass make_label(double wer, double threshold) { return wer <= threshold ? WerClass::kLow : WerClass::kHigh; }

double LinearSvm::decision(std::span<const double> x) const {
  double s = bias;
  for (std::size_t k = 0; k < weights.size(); ++k) s += weights[k] * x[k];
  return s;
}

LinearSvm train_linear_svm(std::span<const std::vector<double>> x, std::span<const int> labels,
                           std::span<const double> costs, const SvmOptions& options) {
  const std::size_t n = x.size();
  if (labels.size() != n || costs.size() != n) throw DataError("feature, label and cost counts differ");
  if (n == 0) throw DataError("degenerate training set: no examples");
  const std::size_t dim = x.front().size();
  bool has_pos = false;
  bool has_neg = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != dim) throw DataError("inconsistent feature dimension");
    if (labels[i] == 1) {
      has_pos = true;
    } else if (labels[i] == -1) {
      has_neg = true;
    } else {
      throw DataError("labels must be +1 or -1");
    }
    if (!(costs[i] > 0.0)) throw DataError("misclassification costs must be positive");
  }
  if (!has_pos || !has_neg) throw DataError("degenerate training set: both classes are required");
  if (!(options.regularization > 0.0)) throw DataError("regularization must be positive");

  // Augmented weight vector: w[dim] is the bias.
  std::vector<double> w(dim + 1, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> upper(n);
  std::vector<double> q_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    upper[i] = options.regularization * costs[i];
    double q = 1.0;
    for (double v : x[i]) q += v * v;
    q_diag[i] = q;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(options.seed);

  LinearSvm result;
  for (int epoch = 0; epoch < options.max_epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double max_violation = 0.0;
    for (std::size_t i : order) {
      const auto& xi = x[i];
      const double y = static_cast<double>(labels[i]);
      double margin = w[dim];
      for (std::size_t k = 0; k < dim; ++k) margin += w[k] * xi[k];
      const double grad = y * margin - 1.0;

      double projected = grad;
      if (alpha[i] <= 0.0) {
        projected = std::min(grad, 0.0);
      } else if (alpha[i] >= upper[i]) {
        projected = std::max(grad, 0.0);
      }
      max_violation = std::max(max_violation, std::abs(projected));
      if (projected == 0.0) continue;

      const double old = alpha[i];
      alpha[i] = std::clamp(old - grad / q_diag[i], 0.0, upper[i]);
      const double step = (alpha[i] - old) * y;
      if (step != 0.0) {
        for (std::size_t k = 0; k < dim; ++k) w[k] += step * xi[k];
        w[dim] += step;
      }
    }
    result.epochs = epoch + 1;
    result.max_violation = max_violation;
    if (max_violation < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.bias = w[dim];
  w.pop_back();
  result.weights = std::move(w);
  return result;
}

double ReliabilityModel::decision(const StandardizedVector& z) const {
  double s = bias;
  for (std::size_t k = 0; k < kFeatureCount; ++k) s += weights[k] * z[k];
  return s;
}

std::vector<LabeledExample> label_examples(std::span<const RawExample> raw, const Standardizer& standardizer,
                                           double wer_threshold) {
  std::vector<LabeledExample> out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    out.push_back({transform(standardizer, r.features), make_label(r.wer, wer_threshold), r.wer, r.duration_ms,
                   r.corpus});
  }
  return out;
}

std::string training_checksum(std::span<const LabeledExample> examples) {
  std::string canonical;
  for (const auto& e : examples) {
    Json row = Json::array();
    row.push_back(static_cast<int>(e.label));
    row.push_back(e.wer);
    row.push_back(e.duration_ms);
    row.push_back(e.corpus);
    for (double v : e.features) row.push_back(v);
    canonical += dump_line(row);
    canonical += '\n';
  }
  return sha256_hex(canonical);
}

ReliabilityModel train(std::span<const LabeledExample> examples, const Standardizer& standardizer,
                       const TrainOptions& options) {
  if (!(options.fp_cost > 0.0)) throw DataError("fp_cost must be positive");
  if (!(options.fn_cost > 0.0)) throw DataError("fn_cost must be positive");

  std::vector<std::vector<double>> x;
  std::vector<int> y;
  std::vector<double> costs;
  x.reserve(examples.size());
  for (const auto& e : examples) {
    x.emplace_back(e.features.begin(), e.features.end());
    y.push_back(static_cast<int>(e.label));
    costs.push_back(e.label == WerClass::kHigh ? options.fp_cost : options.fn_cost);
  }
  SvmOptions svm_options{options.regularization, options.seed, options.tolerance, options.max_epochs};
  const LinearSvm svm = train_linear_svm(x, y, costs, svm_options);

  ReliabilityModel model;
  model.feature_names.assign(feature_names().begin(), feature_names().end());
  model.standardizer = standardizer;
  std::copy(svm.weights.begin(), svm.weights.end(), model.weights.begin());
  model.bias = svm.bias;
  model.fp_cost = options.fp_cost;
  model.fn_cost = options.fn_cost;
  model.regularization = options.regularization;
  model.wer_threshold = options.wer_threshold;
  model.seed = options.seed;
  model.training_checksum = training_checksum(examples);
  model.epochs = svm.epochs;
  model.converged = svm.converged;
  return model;
}

ReliabilityModel train_from_raw(std::span<const RawExample> raw, const TrainOptions& options) {
  std::vector<FeatureVector> features;
  features.reserve(raw.size());
  for (const auto& r : raw) features.push_back(r.features);
  const Standardizer standardizer = fit_standardizer(features);
  const auto labeled = label_examples(raw, standardizer, options.wer_threshold);
  return train(labeled, standardizer, options);
}

Prediction predict(const ReliabilityModel& model, const FeatureVector& raw) {
  const double d = model.decision(transform(model.standardizer, raw));
  return {d >= 0.0 ? WerClass::kLow : WerClass::kHigh, d};
}

namespace {

template <std::size_t N>
Json array_json(const std::array<double, N>& a) {
  Json j = Json::array();
  for (double v : a) j.push_back(v);
  return j;
}

const Json& field(const Json& j, const char* key) {
  auto it = j.find(std::string(key));
  if (it == j.end()) throw Error(std::string("model file: missing field '") + key + "'");
  return *it;
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw Error(std::string("model file: field '") + key + "' must be a number");
  return v.get<double>();
}

std::array<double, kFeatureCount> array_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array() || v.size() != kFeatureCount) {
    throw Error(std::string("model file: field '") + key + "' must hold " + std::to_string(kFeatureCount) +
                " numbers");
  }
  std::array<double, kFeatureCount> out{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!v[i].is_number()) throw Error(std::string("model file: field '") + key + "' must hold numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

}  // namespace

Json model_to_json(const ReliabilityModel& m) {
  Json j = Json::object();
  j["format"] = "asrsel-reliability-model";
  j["format_version"] = std::to_string(ReliabilityModel::kFormatMajor) + "." +
                        std::to_string(ReliabilityModel::kFormatMinor);
  j["feature_names"] = m.feature_names;
  j["standardizer"] = Json::object();
  j["standardizer"]["mean"] = array_json(m.standardizer.mean);
  j["standardizer"]["stddev"] = array_json(m.standardizer.stddev);
  j["weights"] = array_json(m.weights);
  j["bias"] = m.bias;
  Json hp = Json::object();
  hp["fp_cost"] = m.fp_cost;
  hp["fn_cost"] = m.fn_cost;
  hp["regularization"] = m.regularization;
  hp["wer_threshold"] = m.wer_threshold;
  hp["seed"] = m.seed;
  j["hyperparameters"] = std::move(hp);
  Json tr = Json::object();
  tr["dataset_checksum"] = m.training_checksum;
  tr["epochs"] = m.epochs;
  tr["converged"] = m.converged;
  j["training"] = std::move(tr);
  return j;
}

ReliabilityModel model_from_json(const Json& j) {
  if (!j.is_object()) throw Error("model file: expected a JSON object");
  const Json& format = field(j, "format");
  if (!format.is_string() || format.get<std::string>() != "asrsel-reliability-model") {
    throw Error("model file: unrecognized format tag");
  }
  const Json& version = field(j, "format_version");
  if (!version.is_string()) throw Error("model file: format_version must be a string");
  const std::string v = version.get<std::string>();
  int major = 0;
  try {
    major = std::stoi(v.substr(0, v.find('.')));
  } catch (const std::exception&) {
    throw Error("model file: malformed format_version '" + v + "'");
  }
  if (major > ReliabilityModel::kFormatMajor) {
    throw Error("model file: format version " + v + " is newer than supported " +
                std::to_string(ReliabilityModel::kFormatMajor) + ".x");
  }
  if (major < 1) throw Error("model file: malformed format_version '" + v + "'");

  ReliabilityModel m;
  const Json& names = field(j, "feature_names");
  if (!names.is_array() || names.size() != kFeatureCount) {
    throw Error("model file: feature_names must list " + std::to_string(kFeatureCount) + " names");
  }
  for (const auto& n : names) {
    if (!n.is_string()) throw Error("model file: feature names must be strings");
    m.feature_names.push_back(n.get<std::string>());
  }
  const Json& st = field(j, "standardizer");
  m.standardizer.mean = array_field(st, "mean");
  m.standardizer.stddev = array_field(st, "stddev");
  m.weights = array_field(j, "weights");
  m.bias = number(j, "bias");
  const Json& hp = field(j, "hyperparameters");
  m.fp_cost = number(hp, "fp_cost");
  m.fn_cost = number(hp, "fn_cost");
  m.regularization = number(hp, "regularization");
  m.wer_threshold = number(hp, "wer_threshold");
  const Json& seed = field(hp, "seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
    throw Error("model file: seed must be a non-negative integer");
  }
  m.seed = seed.get<std::uint64_t>();
  const Json& tr = field(j, "training");
  const Json& checksum = field(tr, "dataset_checksum");
  if (!checksum.is_string()) throw Error("model file: dataset_checksum must be a string");
  m.training_checksum = checksum.get<std::string>();
  const Json& epochs = field(tr, "epochs");
  if (!epochs.is_number_integer()) throw Error("model file: epochs must be an integer");
  m.epochs = epochs.get<int>();
  const Json& converged = field(tr, "converged");
  if (!converged.is_boolean()) throw Error("model file: converged must be a boolean");
  m.converged = converged.get<bool>();
  return m;
}

std::string serialize_model(const ReliabilityModel& model) { return model_to_json(model).dump(2) + "\n"; }

ReliabilityModel parse_model(std::string_view text, std::string_view origin) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string(origin) + ": corrupt model file: " + e.what());
  }
  try {
    return model_from_json(j);
  } catch (const Error& e) {
    throw Error(std::string(origin) + ": " + e.what());
  }
}

void save_model(const ReliabilityModel& model, const std::filesystem::path& path) {
  io::write_file_atomic(path, serialize_model(model));
}

ReliabilityModel load_model(const std::filesystem::path& path) {
  return parse_model(io::read_file(path), path.filename().string());
}

}  // namespace asrsel
