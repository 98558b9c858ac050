#include "epfw/models/model.hpp"

#include <algorithm>

#include <json.hpp>

#include "epfw/errors.hpp"

namespace epfw::models {
namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows > 0 ? static_cast<Index>(j.at(0).size()) : 0;
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = j.at(static_cast<std::size_t>(r))
                    .at(static_cast<std::size_t>(c))
                    .get<double>();
    }
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    out.push_back(v[i]);
  }
  return out;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Index>(i)] = j.at(i).get<double>();
  }
  return v;
}

json tree_to_json(const RegressionTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes()) {
    nodes.push_back(json::array(
        {n.feature, n.threshold, n.left, n.right, n.value}));
  }
  return nodes;
}

RegressionTree tree_from_json(const json& j) {
  std::vector<TreeNode> nodes;
  nodes.reserve(j.size());
  for (const auto& entry : j) {
    TreeNode n;
    n.feature = entry.at(0).get<int>();
    n.threshold = entry.at(1).get<double>();
    n.left = entry.at(2).get<int>();
    n.right = entry.at(3).get<int>();
    n.value = entry.at(4).get<double>();
    nodes.push_back(n);
  }
  return RegressionTree(std::move(nodes));
}

json params_to_json(const ModelParams& params) {
  struct Visitor {
    json operator()(const OlsParams&) { return json::object(); }
    json operator()(const SgdLinearParams& p) {
      return {{"learning_rate", p.learning_rate},
              {"epochs", p.epochs},
              {"batch_size", p.batch_size}};
    }
    json operator()(const MlpParams& p) {
      return {{"hidden", p.hidden},
              {"activation", p.activation},
              {"learning_rate", p.learning_rate},
              {"epochs", p.epochs},
              {"batch_size", p.batch_size}};
    }
    json operator()(const KnnParams& p) {
      return {{"k", p.k},
              {"distance_weighting", p.distance_weighting},
              {"leaf_size", p.leaf_size}};
    }
    json operator()(const RandomForestParams& p) {
      return {{"trees", p.trees},
              {"max_depth", p.max_depth},
              {"min_samples_split", p.min_samples_split},
              {"bootstrap", p.bootstrap},
              {"feature_subsets", p.feature_subsets}};
    }
    json operator()(const GradientBoostParams& p) {
      return {{"learning_rate", p.learning_rate},
              {"max_depth", p.max_depth},
              {"trees", p.trees},
              {"min_samples_split", p.min_samples_split}};
    }
    json operator()(const LinearSvrParams& p) {
      return {{"epsilon", p.epsilon},
              {"C", p.c},
              {"max_iterations", p.max_iterations}};
    }
  };
  return std::visit(Visitor{}, params);
}

ModelParams params_from_json(const std::string& kind, const json& j) {
  if (kind == "linear_regression") {
    return OlsParams{};
  }
  if (kind == "dense0") {
    SgdLinearParams p;
    p.learning_rate = j.at("learning_rate").get<double>();
    p.epochs = j.at("epochs").get<int>();
    p.batch_size = j.at("batch_size").get<int>();
    return p;
  }
  if (kind == "mlp") {
    MlpParams p;
    p.hidden = j.at("hidden").get<std::vector<int>>();
    p.activation = j.at("activation").get<std::string>();
    p.learning_rate = j.at("learning_rate").get<double>();
    p.epochs = j.at("epochs").get<int>();
    p.batch_size = j.at("batch_size").get<int>();
    return p;
  }
  if (kind == "knn") {
    KnnParams p;
    p.k = j.at("k").get<int>();
    p.distance_weighting = j.at("distance_weighting").get<bool>();
    p.leaf_size = j.at("leaf_size").get<int>();
    return p;
  }
  if (kind == "random_forest") {
    RandomForestParams p;
    p.trees = j.at("trees").get<int>();
    p.max_depth = j.at("max_depth").get<int>();
    p.min_samples_split = j.at("min_samples_split").get<int>();
    p.bootstrap = j.at("bootstrap").get<bool>();
    p.feature_subsets = j.at("feature_subsets").get<bool>();
    return p;
  }
  if (kind == "gradient_boost") {
    GradientBoostParams p;
    p.learning_rate = j.at("learning_rate").get<double>();
    p.max_depth = j.at("max_depth").get<int>();
    p.trees = j.at("trees").get<int>();
    p.min_samples_split = j.at("min_samples_split").get<int>();
    return p;
  }
  if (kind == "linear_svr") {
    LinearSvrParams p;
    p.epsilon = j.at("epsilon").get<double>();
    p.c = j.at("C").get<double>();
    p.max_iterations = j.at("max_iterations").get<int>();
    return p;
  }
  throw DataError("unknown model kind '" + kind + "' in serialized model");
}

json state_to_json(const ModelState& state) {
  struct Visitor {
    json operator()(const LinearModel& m) {
      return {{"family", "linear"},
              {"weights", vector_to_json(m.weights)},
              {"bias", m.bias}};
    }
    json operator()(const MlpNetwork& m) {
      json weights = json::array();
      json biases = json::array();
      for (std::size_t l = 0; l < m.layers(); ++l) {
        weights.push_back(matrix_to_json(m.weights()[l]));
        biases.push_back(vector_to_json(m.biases()[l]));
      }
      return {{"family", "mlp"},
              {"inputs", m.inputs()},
              {"weights", std::move(weights)},
              {"biases", std::move(biases)}};
    }
    json operator()(const KnnModel& m) {
      return {{"family", "knn"},
              {"k", m.k},
              {"distance_weighting", m.distance_weighting},
              {"train_X", matrix_to_json(m.train_X)},
              {"train_y", vector_to_json(m.train_y)}};
    }
    json operator()(const ForestModel& m) {
      json trees = json::array();
      for (const auto& t : m.trees) {
        trees.push_back(tree_to_json(t));
      }
      return {{"family", "forest"}, {"trees", std::move(trees)}};
    }
    json operator()(const BoostModel& m) {
      json trees = json::array();
      for (const auto& t : m.trees) {
        trees.push_back(tree_to_json(t));
      }
      return {{"family", "boost"},
              {"init", m.init},
              {"learning_rate", m.learning_rate},
              {"trees", std::move(trees)}};
    }
  };
  return std::visit(Visitor{}, state);
}

ModelState state_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "linear") {
    LinearModel m;
    m.weights = vector_from_json(j.at("weights"));
    m.bias = j.at("bias").get<double>();
    return m;
  }
  if (family == "mlp") {
    MlpNetwork net;
    // Rebuild through a throwaway seeded network of the right shape, then
    // overwrite every parameter.
    const auto& weights = j.at("weights");
    std::vector<int> hidden;
    for (std::size_t l = 0; l + 1 < weights.size(); ++l) {
      hidden.push_back(static_cast<int>(weights.at(l).size()));
    }
    Rng rng(0);
    net = MlpNetwork(j.at("inputs").get<Index>(), hidden, rng);
    for (std::size_t l = 0; l < weights.size(); ++l) {
      net.weights()[l] = matrix_from_json(weights.at(l));
      net.biases()[l] = vector_from_json(j.at("biases").at(l));
    }
    return net;
  }
  if (family == "knn") {
    KnnModel m;
    m.k = j.at("k").get<int>();
    m.distance_weighting = j.at("distance_weighting").get<bool>();
    m.train_X = matrix_from_json(j.at("train_X"));
    m.train_y = vector_from_json(j.at("train_y"));
    return m;
  }
  if (family == "forest") {
    ForestModel m;
    for (const auto& t : j.at("trees")) {
      m.trees.push_back(tree_from_json(t));
    }
    return m;
  }
  if (family == "boost") {
    BoostModel m;
    m.init = j.at("init").get<double>();
    m.learning_rate = j.at("learning_rate").get<double>();
    for (const auto& t : j.at("trees")) {
      m.trees.push_back(tree_from_json(t));
    }
    return m;
  }
  throw DataError("unknown model family '" + family + "'");
}

}  // namespace

TrainedModel::TrainedModel(ModelSpec spec, std::vector<std::string> columns,
                           ModelState state)
    : spec_(std::move(spec)),
      columns_(std::move(columns)),
      state_(std::move(state)) {}

Vector TrainedModel::predict(const features::FeatureMatrix& matrix) const {
  if (matrix.columns != columns_) {
    std::string detail;
    for (const auto& name : columns_) {
      if (std::find(matrix.columns.begin(), matrix.columns.end(), name) ==
          matrix.columns.end()) {
        detail += " missing:" + name;
      }
    }
    for (const auto& name : matrix.columns) {
      if (std::find(columns_.begin(), columns_.end(), name) ==
          columns_.end()) {
        detail += " unexpected:" + name;
      }
    }
    if (detail.empty()) {
      detail = " (same names, different order)";
    }
    throw RunError("prediction columns differ from fitted columns:" + detail);
  }
  return predict_rows(matrix.X);
}

Vector TrainedModel::predict_rows(const Matrix& X) const {
  struct Visitor {
    const Matrix& X;
    Vector operator()(const LinearModel& m) { return models::predict(m, X); }
    Vector operator()(const MlpNetwork& m) { return m.predict(X); }
    Vector operator()(const KnnModel& m) { return models::predict(m, X); }
    Vector operator()(const ForestModel& m) { return models::predict(m, X); }
    Vector operator()(const BoostModel& m) { return models::predict(m, X); }
  };
  if (X.cols() != static_cast<Index>(columns_.size())) {
    throw RunError("prediction matrix has " + std::to_string(X.cols()) +
                   " columns, model was fitted on " +
                   std::to_string(columns_.size()));
  }
  Vector out = std::visit(Visitor{X}, state_);
  if (!out.allFinite()) {
    throw RunError("model '" + spec_.name + "' produced non-finite output");
  }
  return out;
}

bool TrainedModel::has_coefficients() const {
  return std::holds_alternative<LinearModel>(state_);
}

Vector TrainedModel::coefficients() const {
  if (!has_coefficients()) {
    throw RunError("model '" + spec_.name +
                   "' does not expose per-feature coefficients");
  }
  return std::get<LinearModel>(state_).weights;
}

double TrainedModel::intercept() const {
  if (!has_coefficients()) {
    throw RunError("model '" + spec_.name +
                   "' does not expose an intercept");
  }
  return std::get<LinearModel>(state_).bias;
}

std::string TrainedModel::serialize() const {
  json doc;
  doc["format"] = "epfw-model";
  doc["version"] = 1;
  doc["name"] = spec_.name;
  doc["kind"] = spec_.kind();
  doc["seed"] = spec_.seed;
  doc["columns"] = columns_;
  doc["params"] = params_to_json(spec_.params);
  doc["state"] = state_to_json(state_);
  return doc.dump();
}

TrainedModel TrainedModel::deserialize(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("cannot parse serialized model: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "epfw-model") {
      throw DataError("not a serialized model document");
    }
    if (doc.at("version").get<int>() != 1) {
      throw DataError("unsupported model container version");
    }
    ModelSpec spec;
    spec.name = doc.at("name").get<std::string>();
    spec.seed = doc.at("seed").get<std::uint64_t>();
    spec.params =
        params_from_json(doc.at("kind").get<std::string>(), doc.at("params"));
    return TrainedModel(std::move(spec),
                        doc.at("columns").get<std::vector<std::string>>(),
                        state_from_json(doc.at("state")));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed serialized model: ") + e.what());
  }
}

TrainedModel fit(const ModelSpec& spec, const features::FeatureMatrix& train) {
  validate(spec);
  train.validate();
  if (train.rows() == 0) {
    throw RunError("cannot fit on an empty matrix");
  }

  struct Visitor {
    const ModelSpec& spec;
    const features::FeatureMatrix& train;

    ModelState operator()(const OlsParams&) {
      return fit_ols(train.X, train.y);
    }
    ModelState operator()(const SgdLinearParams& p) {
      return fit_sgd_linear(train.X, train.y, p, spec.seed);
    }
    ModelState operator()(const MlpParams& p) {
      return fit_mlp(train.X, train.y, p, spec.seed);
    }
    ModelState operator()(const KnnParams& p) {
      return fit_knn(train.X, train.y, p);
    }
    ModelState operator()(const RandomForestParams& p) {
      return fit_random_forest(train.X, train.y, p, spec.seed);
    }
    ModelState operator()(const GradientBoostParams& p) {
      return fit_gradient_boost(train.X, train.y, p);
    }
    ModelState operator()(const LinearSvrParams& p) {
      return fit_linear_svr(train.X, train.y, p);
    }
  };
  ModelState state = std::visit(Visitor{spec, train}, spec.params);
  return TrainedModel(spec, train.columns, std::move(state));
}

}  // namespace epfw::models
