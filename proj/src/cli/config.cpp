#include "epfw/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>

#include <json.hpp>

#include "epfw/errors.hpp"

namespace epfw::cli {

namespace {

using nlohmann::json;

void check_keys(const json& node, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!node.is_object()) {
    throw ConfigError(where + " must be an object");
  }
  for (const auto& item : node.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* key) {
          return item.key() == key;
        }) == allowed.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

const json& require(const json& node, const char* key,
                    const std::string& where) {
  const auto it = node.find(key);
  if (it == node.end()) {
    throw ConfigError(where + " is missing required key '" + key + "'");
  }
  return *it;
}

Date parse_date(const json& node, const std::string& where) {
  if (!node.is_string()) {
    throw ConfigError(where + " must be a \"YYYY-MM-DD\" string");
  }
  return Date::parse(node.get<std::string>());
}

DateRange parse_range(const json& node, const std::string& where) {
  if (!node.is_object()) {
    throw ConfigError(where + " must be an object with start and end");
  }
  check_keys(node, where, {"start", "end"});
  return make_range(parse_date(require(node, "start", where), where + ".start"),
                    parse_date(require(node, "end", where), where + ".end"));
}

ingest::DstCalendar parse_dst(const json& node) {
  check_keys(node, "data.dst", {"european", "spring_forward", "fall_back"});
  if (node.contains("european")) {
    if (node.size() != 1 || !node["european"].is_array() ||
        node["european"].size() != 2) {
      throw ConfigError(
          "data.dst.european must be a two-element [first_year, last_year] "
          "array and cannot mix with explicit dates");
    }
    return ingest::DstCalendar::european(node["european"][0].get<int>(),
                                         node["european"][1].get<int>());
  }
  ingest::DstCalendar dst;
  for (const json& d : node.value("spring_forward", json::array())) {
    dst.spring_forward.push_back(parse_date(d, "data.dst.spring_forward"));
  }
  for (const json& d : node.value("fall_back", json::array())) {
    dst.fall_back.push_back(parse_date(d, "data.dst.fall_back"));
  }
  return dst;
}

std::vector<ingest::SourceSchema> parse_sources(const json& node) {
  std::vector<ingest::SourceSchema> sources;
  std::set<std::string> names;
  for (const json& entry : node) {
    const std::string where =
        "data.sources[" + std::to_string(sources.size()) + "]";
    check_keys(entry, where,
               {"name", "path", "resolution", "timestamp_column",
                "timestamp_format", "value_column", "unit"});
    ingest::SourceSchema schema;
    schema.name = require(entry, "name", where).get<std::string>();
    schema.path = require(entry, "path", where).get<std::string>();
    schema.resolution = ingest::parse_resolution(
        entry.value("resolution", std::string("hourly")));
    schema.timestamp_column =
        require(entry, "timestamp_column", where).get<std::string>();
    schema.timestamp_format =
        require(entry, "timestamp_format", where).get<std::string>();
    schema.value_column =
        require(entry, "value_column", where).get<std::string>();
    schema.unit = entry.value("unit", std::string());
    if (!names.insert(schema.name).second) {
      throw ConfigError("duplicate source name '" + schema.name + "'");
    }
    sources.push_back(std::move(schema));
  }
  return sources;
}

ingest::SyntheticRecipe parse_synthetic(const json& node) {
  check_keys(node, "synthetic",
             {"start", "end", "base_price", "price_daily", "price_weekly",
              "price_noise_sd", "gas_start", "gas_step_sd", "gas_min",
              "gas_coupling", "demand_base", "demand_daily",
              "demand_weekend_drop", "demand_noise_sd", "demand_coupling",
              "wind_mean", "wind_sd", "wind_ar", "wind_max", "wind_coupling",
              "solar_peak"});
  ingest::SyntheticRecipe recipe;
  recipe.range =
      make_range(parse_date(require(node, "start", "synthetic"), "synthetic.start"),
                 parse_date(require(node, "end", "synthetic"), "synthetic.end"));
  const auto num = [&](const char* key, double fallback) {
    return node.value(key, fallback);
  };
  recipe.base_price = num("base_price", recipe.base_price);
  recipe.price_daily = num("price_daily", recipe.price_daily);
  recipe.price_weekly = num("price_weekly", recipe.price_weekly);
  recipe.price_noise_sd = num("price_noise_sd", recipe.price_noise_sd);
  recipe.gas_start = num("gas_start", recipe.gas_start);
  recipe.gas_step_sd = num("gas_step_sd", recipe.gas_step_sd);
  recipe.gas_min = num("gas_min", recipe.gas_min);
  recipe.gas_coupling = num("gas_coupling", recipe.gas_coupling);
  recipe.demand_base = num("demand_base", recipe.demand_base);
  recipe.demand_daily = num("demand_daily", recipe.demand_daily);
  recipe.demand_weekend_drop =
      num("demand_weekend_drop", recipe.demand_weekend_drop);
  recipe.demand_noise_sd = num("demand_noise_sd", recipe.demand_noise_sd);
  recipe.demand_coupling = num("demand_coupling", recipe.demand_coupling);
  recipe.wind_mean = num("wind_mean", recipe.wind_mean);
  recipe.wind_sd = num("wind_sd", recipe.wind_sd);
  recipe.wind_ar = num("wind_ar", recipe.wind_ar);
  recipe.wind_max = num("wind_max", recipe.wind_max);
  recipe.wind_coupling = num("wind_coupling", recipe.wind_coupling);
  recipe.solar_peak = num("solar_peak", recipe.solar_peak);
  return recipe;
}

features::FeatureSpec parse_features(const json& node) {
  check_keys(node, "features",
             {"target", "base", "lags", "calendar", "wind_average"});
  std::string target = node.value("target", std::string("dam_price"));
  std::vector<std::string> base;
  for (const json& name : node.value("base", json::array())) {
    base.push_back(name.get<std::string>());
  }
  std::vector<features::LagSpec> lags;
  for (const json& lag : node.value("lags", json::array())) {
    const std::string where = "features.lags[" + std::to_string(lags.size()) + "]";
    check_keys(lag, where, {"column", "hours"});
    lags.push_back({require(lag, "column", where).get<std::string>(),
                    require(lag, "hours", where).get<int>()});
  }
  std::vector<features::CalendarField> calendar;
  for (const json& field : node.value("calendar", json::array())) {
    calendar.push_back(
        features::parse_calendar_field(field.get<std::string>()));
  }
  std::optional<features::WindAverageSpec> average;
  if (node.contains("wind_average")) {
    const json& avg = node["wind_average"];
    check_keys(avg, "features.wind_average", {"name", "stations"});
    features::WindAverageSpec w;
    w.name = require(avg, "name", "features.wind_average").get<std::string>();
    for (const json& s : require(avg, "stations", "features.wind_average")) {
      w.stations.push_back(s.get<std::string>());
    }
    average = std::move(w);
  }
  return features::FeatureSpec(std::move(target), std::move(base),
                               std::move(lags), std::move(calendar),
                               std::move(average));
}

std::vector<models::ModelSpec> parse_models(const json& node,
                                            std::uint64_t default_seed) {
  std::vector<models::ModelSpec> specs;
  std::set<std::string> names;
  for (const json& entry : node) {
    const std::string where = "models[" + std::to_string(specs.size()) + "]";
    const std::string kind = require(entry, "kind", where).get<std::string>();
    const std::string name = entry.value("name", kind);
    const std::uint64_t seed = entry.value("seed", default_seed);
    models::ModelSpec spec = models::make_model_spec(kind, name, seed);
    for (const auto& item : entry.items()) {
      const std::string& key = item.key();
      if (key == "kind" || key == "name" || key == "seed") {
        continue;
      }
      if (key == "hidden") {
        auto* mlp = std::get_if<models::MlpParams>(&spec.params);
        if (!mlp) {
          throw ConfigError(where + ": 'hidden' only applies to mlp models");
        }
        mlp->hidden.clear();
        for (const json& width : item.value()) {
          mlp->hidden.push_back(width.get<int>());
        }
      } else if (key == "activation") {
        auto* mlp = std::get_if<models::MlpParams>(&spec.params);
        if (!mlp) {
          throw ConfigError(where +
                            ": 'activation' only applies to mlp models");
        }
        mlp->activation = item.value().get<std::string>();
      } else if (key == "bootstrap" || key == "feature_subsets") {
        auto* forest = std::get_if<models::RandomForestParams>(&spec.params);
        if (!forest) {
          throw ConfigError(where + ": '" + key +
                            "' only applies to random_forest models");
        }
        (key == "bootstrap" ? forest->bootstrap : forest->feature_subsets) =
            item.value().get<bool>();
      } else if (item.value().is_boolean()) {
        models::set_param(spec, key, item.value().get<bool>() ? 1.0 : 0.0);
      } else if (item.value().is_number()) {
        models::set_param(spec, key, item.value().get<double>());
      } else {
        throw ConfigError(where + ": parameter '" + key +
                          "' must be numeric");
      }
    }
    models::validate(spec);
    if (!names.insert(spec.name).second) {
      throw ConfigError("duplicate model name '" + spec.name + "'");
    }
    specs.push_back(std::move(spec));
  }
  if (specs.empty()) {
    throw ConfigError("models must list at least one model");
  }
  return specs;
}

AnalysisConfig parse_analysis(const json& node) {
  check_keys(node, "analysis", {"features", "periods"});
  AnalysisConfig analysis;
  for (const json& name : node.value("features", json::array())) {
    analysis.features.push_back(name.get<std::string>());
  }
  std::size_t i = 0;
  for (const json& period : node.value("periods", json::array())) {
    analysis.periods.push_back(
        parse_range(period, "analysis.periods[" + std::to_string(i++) + "]"));
  }
  return analysis;
}

SelectionConfig parse_selection(const json& node) {
  check_keys(node, "selection", {"trainer", "validation_fraction", "range"});
  SelectionConfig selection;
  selection.trainer = node.value("trainer", selection.trainer);
  selection.validation_fraction =
      node.value("validation_fraction", selection.validation_fraction);
  if (node.contains("range")) {
    selection.range = parse_range(node["range"], "selection.range");
  }
  return selection;
}

TuneConfig parse_tune(const json& node) {
  check_keys(node, "tune",
             {"model", "grid", "budget", "validation_fraction", "range"});
  TuneConfig tune;
  tune.model = require(node, "model", "tune").get<std::string>();
  for (const json& axis : require(node, "grid", "tune")) {
    const std::string where =
        "tune.grid[" + std::to_string(tune.grid.size()) + "]";
    check_keys(axis, where, {"param", "values"});
    std::vector<double> values;
    for (const json& v : require(axis, "values", where)) {
      values.push_back(v.get<double>());
    }
    tune.grid.emplace_back(require(axis, "param", where).get<std::string>(),
                           std::move(values));
  }
  tune.budget = node.value("budget", tune.budget);
  tune.validation_fraction =
      node.value("validation_fraction", tune.validation_fraction);
  if (node.contains("range")) {
    tune.range = parse_range(node["range"], "tune.range");
  }
  return tune;
}

BacktestConfig parse_backtest(const json& node) {
  check_keys(node, "backtest", {"quarters", "data_start", "models", "traces"});
  BacktestConfig backtest;
  for (const json& q : require(node, "quarters", "backtest")) {
    backtest.quarters.push_back(q.get<std::string>());
  }
  if (node.contains("data_start")) {
    backtest.data_start = parse_date(node["data_start"], "backtest.data_start");
  }
  for (const json& name : node.value("models", json::array())) {
    backtest.models.push_back(name.get<std::string>());
  }
  std::size_t i = 0;
  for (const json& trace : node.value("traces", json::array())) {
    const std::string where = "backtest.traces[" + std::to_string(i++) + "]";
    check_keys(trace, where, {"quarter", "models", "week"});
    epfw::backtest::TraceRequest request;
    request.quarter = require(trace, "quarter", where).get<std::string>();
    for (const json& name : require(trace, "models", where)) {
      request.models.push_back(name.get<std::string>());
    }
    request.week = parse_range(require(trace, "week", where), where + ".week");
    backtest.traces.push_back(std::move(request));
  }
  return backtest;
}

}  // namespace

const models::ModelSpec& RunConfig::model_named(const std::string& name) const {
  for (const models::ModelSpec& spec : models) {
    if (spec.name == name) {
      return spec;
    }
  }
  throw ConfigError("no configured model is named '" + name + "'");
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path.string() + "': " + e.what());
  }

  try {
    check_keys(root, "config",
               {"version", "seed", "jobs", "output_dir", "data", "synthetic",
                "features", "models", "analysis", "selection", "tune",
                "backtest"});
    if (root.value("version", 1) != 1) {
      throw ConfigError("unsupported config version " +
                        root["version"].dump() + " (this build reads 1)");
    }

    RunConfig config;
    config.base_dir = std::filesystem::absolute(path).parent_path();
    const auto resolve = [&](const std::filesystem::path& p) {
      return p.is_absolute() ? p : config.base_dir / p;
    };

    if (!root.contains("seed")) {
      throw ConfigError(
          "config is missing 'seed'; every run must be explicitly seeded");
    }
    config.seed = root["seed"].get<std::uint64_t>();
    config.jobs = root.value("jobs", 1);
    if (config.jobs < 1) {
      throw ConfigError("jobs must be at least 1");
    }
    config.output_dir = resolve(root.value("output_dir", std::string("out")));
    config.aligned_path = config.output_dir / "aligned.csv";

    if (root.contains("data")) {
      const json& data = root["data"];
      check_keys(data, "data",
                 {"aligned_path", "max_gap_hours", "range", "dst", "sources"});
      if (data.contains("aligned_path")) {
        config.aligned_path =
            resolve(data["aligned_path"].get<std::string>());
        config.aligned_path_defaulted = false;
      }
      config.max_gap_hours = data.value("max_gap_hours", 6);
      if (config.max_gap_hours < 0) {
        throw ConfigError("data.max_gap_hours must be nonnegative");
      }
      if (data.contains("range")) {
        config.data_range = parse_range(data["range"], "data.range");
      }
      if (data.contains("dst")) {
        config.dst = parse_dst(data["dst"]);
      }
      if (data.contains("sources")) {
        config.sources = parse_sources(data["sources"]);
        for (ingest::SourceSchema& schema : config.sources) {
          schema.path = resolve(schema.path).string();
        }
      }
    }

    if (root.contains("synthetic")) {
      config.synthetic = parse_synthetic(root["synthetic"]);
    }
    if (root.contains("features")) {
      config.feature_spec = parse_features(root["features"]);
    }
    config.models = root.contains("models")
                        ? parse_models(root["models"], config.seed)
                        : models::default_model_zoo(config.seed);
    if (root.contains("analysis")) {
      config.analysis = parse_analysis(root["analysis"]);
    }
    if (root.contains("selection")) {
      config.selection = parse_selection(root["selection"]);
    }
    if (root.contains("tune")) {
      config.tune = parse_tune(root["tune"]);
      config.model_named(config.tune->model);
    }
    if (root.contains("backtest")) {
      config.backtest = parse_backtest(root["backtest"]);
      if (config.backtest->quarters.empty()) {
        throw ConfigError("backtest.quarters must list at least one quarter");
      }
      for (const std::string& q : config.backtest->quarters) {
        quarter_range(q);  // label check
      }
      for (const std::string& name : config.backtest->models) {
        config.model_named(name);
      }
    }
    return config;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path.string() + "': " + e.what());
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace epfw::cli
