#include "epfw/models/spec.hpp"

#include <cmath>

#include "epfw/errors.hpp"

namespace epfw::models {
namespace {

void require_positive(long value, const char* what) {
  if (value <= 0) {
    throw ConfigError(std::string(what) + " must be positive, got " +
                      std::to_string(value));
  }
}

void require_rate(double value, const char* what) {
  if (!(value > 0.0) || value > 1.0) {
    throw ConfigError(std::string(what) + " must lie in (0, 1], got " +
                      std::to_string(value));
  }
}

int as_int(const std::string& param, double value) {
  const double rounded = std::nearbyint(value);
  if (rounded != value) {
    throw ConfigError("parameter '" + param + "' must be an integer, got " +
                      std::to_string(value));
  }
  return static_cast<int>(rounded);
}

}  // namespace

std::string ModelSpec::kind() const {
  struct Visitor {
    std::string operator()(const OlsParams&) { return "linear_regression"; }
    std::string operator()(const SgdLinearParams&) { return "dense0"; }
    std::string operator()(const MlpParams&) { return "mlp"; }
    std::string operator()(const KnnParams&) { return "knn"; }
    std::string operator()(const RandomForestParams&) {
      return "random_forest";
    }
    std::string operator()(const GradientBoostParams&) {
      return "gradient_boost";
    }
    std::string operator()(const LinearSvrParams&) { return "linear_svr"; }
  };
  return std::visit(Visitor{}, params);
}

void validate(const ModelSpec& spec) {
  struct Visitor {
    void operator()(const OlsParams&) {}
    void operator()(const SgdLinearParams& p) {
      require_rate(p.learning_rate, "learning_rate");
      require_positive(p.epochs, "epochs");
      require_positive(p.batch_size, "batch_size");
    }
    void operator()(const MlpParams& p) {
      require_rate(p.learning_rate, "learning_rate");
      require_positive(p.epochs, "epochs");
      require_positive(p.batch_size, "batch_size");
      for (const int width : p.hidden) {
        require_positive(width, "hidden width");
      }
      if (p.activation != "relu") {
        throw ConfigError("unsupported activation '" + p.activation + "'");
      }
    }
    void operator()(const KnnParams& p) {
      require_positive(p.k, "k");
      require_positive(p.leaf_size, "leaf_size");
    }
    void operator()(const RandomForestParams& p) {
      require_positive(p.trees, "trees");
      require_positive(p.max_depth, "max_depth");
      require_positive(p.min_samples_split, "min_samples_split");
    }
    void operator()(const GradientBoostParams& p) {
      require_rate(p.learning_rate, "learning_rate");
      require_positive(p.trees, "trees");
      require_positive(p.max_depth, "max_depth");
      require_positive(p.min_samples_split, "min_samples_split");
    }
    void operator()(const LinearSvrParams& p) {
      if (p.epsilon < 0.0) {
        throw ConfigError("epsilon must be nonnegative, got " +
                          std::to_string(p.epsilon));
      }
      if (!(p.c > 0.0)) {
        throw ConfigError("C must be positive, got " + std::to_string(p.c));
      }
      require_positive(p.max_iterations, "max_iterations");
    }
  };
  if (spec.name.empty()) {
    throw ConfigError("model spec needs a name");
  }
  std::visit(Visitor{}, spec.params);
}

ModelSpec make_model_spec(const std::string& kind, const std::string& name,
                          std::uint64_t seed) {
  ModelSpec spec;
  spec.name = name;
  spec.seed = seed;
  if (kind == "linear_regression") {
    spec.params = OlsParams{};
  } else if (kind == "dense0") {
    spec.params = SgdLinearParams{};
  } else if (kind == "mlp" || kind == "mlp_4n") {
    spec.params = MlpParams{};
  } else if (kind == "mlp_multiple") {
    MlpParams p;
    p.hidden = {32, 64, 32};
    spec.params = p;
  } else if (kind == "knn") {
    spec.params = KnnParams{};
  } else if (kind == "random_forest") {
    spec.params = RandomForestParams{};
  } else if (kind == "gradient_boost") {
    spec.params = GradientBoostParams{};
  } else if (kind == "linear_svr") {
    spec.params = LinearSvrParams{};
  } else {
    throw ConfigError("unknown model kind '" + kind + "'");
  }
  return spec;
}

std::vector<ModelSpec> default_model_zoo(std::uint64_t seed) {
  std::vector<ModelSpec> zoo;
  zoo.push_back(make_model_spec("linear_regression", "linear_regression", seed));
  zoo.push_back(make_model_spec("dense0", "dense0", seed));
  zoo.push_back(make_model_spec("mlp_4n", "mlp_4n", seed));
  zoo.push_back(make_model_spec("mlp_multiple", "mlp_multiple", seed));
  zoo.push_back(make_model_spec("knn", "knn", seed));
  zoo.push_back(make_model_spec("random_forest", "random_forest", seed));
  zoo.push_back(make_model_spec("gradient_boost", "gradient_boost", seed));
  zoo.push_back(make_model_spec("linear_svr", "linear_svr", seed));
  return zoo;
}

void set_param(ModelSpec& spec, const std::string& param, double value) {
  struct Visitor {
    const std::string& param;
    double value;

    void unknown(const char* kind) {
      throw ConfigError("model kind " + std::string(kind) +
                        " has no tunable parameter '" + param + "'");
    }
    void operator()(OlsParams&) { unknown("linear_regression"); }
    void operator()(SgdLinearParams& p) {
      if (param == "learning_rate") {
        p.learning_rate = value;
      } else if (param == "epochs") {
        p.epochs = as_int(param, value);
      } else if (param == "batch_size") {
        p.batch_size = as_int(param, value);
      } else {
        unknown("dense0");
      }
    }
    void operator()(MlpParams& p) {
      if (param == "learning_rate") {
        p.learning_rate = value;
      } else if (param == "epochs") {
        p.epochs = as_int(param, value);
      } else if (param == "batch_size") {
        p.batch_size = as_int(param, value);
      } else {
        unknown("mlp");
      }
    }
    void operator()(KnnParams& p) {
      if (param == "k") {
        p.k = as_int(param, value);
      } else if (param == "leaf_size") {
        p.leaf_size = as_int(param, value);
      } else if (param == "distance_weighting") {
        p.distance_weighting = as_int(param, value) != 0;
      } else {
        unknown("knn");
      }
    }
    void operator()(RandomForestParams& p) {
      if (param == "trees") {
        p.trees = as_int(param, value);
      } else if (param == "max_depth") {
        p.max_depth = as_int(param, value);
      } else if (param == "min_samples_split") {
        p.min_samples_split = as_int(param, value);
      } else {
        unknown("random_forest");
      }
    }
    void operator()(GradientBoostParams& p) {
      if (param == "learning_rate") {
        p.learning_rate = value;
      } else if (param == "trees") {
        p.trees = as_int(param, value);
      } else if (param == "max_depth") {
        p.max_depth = as_int(param, value);
      } else if (param == "min_samples_split") {
        p.min_samples_split = as_int(param, value);
      } else {
        unknown("gradient_boost");
      }
    }
    void operator()(LinearSvrParams& p) {
      if (param == "epsilon") {
        p.epsilon = value;
      } else if (param == "C" || param == "c") {
        p.c = value;
      } else if (param == "max_iterations") {
        p.max_iterations = as_int(param, value);
      } else {
        unknown("linear_svr");
      }
    }
  };
  std::visit(Visitor{param, value}, spec.params);
}

}  // namespace epfw::models
