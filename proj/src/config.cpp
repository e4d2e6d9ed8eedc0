#include "pfha/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include <json.hpp>

#include "pfha/csv.hpp"
#include "pfha/hazard.hpp"
#include "pfha/mathutil.hpp"

namespace pfha {

namespace {

using nlohmann::json;

void require_keys(const json& object, const std::set<std::string>& allowed,
                  const std::string& where) {
  for (const auto& [key, value] : object.items())
    if (!allowed.count(key))
      throw ConfigError("unknown config key \"" + key + "\" in " + where);
}

double number_or(const json& object, const char* key, double fallback) {
  if (!object.contains(key)) return fallback;
  if (!object[key].is_number())
    throw ConfigError(std::string("config key \"") + key + "\" must be a number");
  return object[key].get<double>();
}

std::string string_or(const json& object, const char* key, const std::string& fallback) {
  if (!object.contains(key)) return fallback;
  if (!object[key].is_string())
    throw ConfigError(std::string("config key \"") + key + "\" must be a string");
  return object[key].get<std::string>();
}

bool bool_or(const json& object, const char* key, bool fallback) {
  if (!object.contains(key)) return fallback;
  if (!object[key].is_boolean())
    throw ConfigError(std::string("config key \"") + key + "\" must be a boolean");
  return object[key].get<bool>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& rel) {
  if (rel.empty()) return {};
  std::filesystem::path p(rel);
  return p.is_absolute() ? p : base / p;
}

std::vector<ValueBranch> value_branches(const json& arr, const char* name) {
  if (!arr.is_array())
    throw ConfigError(std::string("logic-tree branch ") + name + " must be an array");
  std::vector<ValueBranch> out;
  for (const auto& item : arr) {
    require_keys(item, {"value", "weight"}, std::string("logic_tree.") + name);
    out.push_back({number_or(item, "value", 0.0), number_or(item, "weight", 0.0)});
  }
  return out;
}

}  // namespace

std::vector<double> Config::thresholds() const {
  if (!explicit_thresholds_hz.empty()) return explicit_thresholds_hz;
  return default_threshold_grid(thresholds_lo_hz, thresholds_hi_hz, thresholds_step_hz);
}

std::string Config::hash_hex() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash));
  return buf;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json root;
  try {
    root = json::parse(in, nullptr, true, true);  // allow comments
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse failure in " + path.string() + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");

  require_keys(root,
               {"data", "pmf", "states", "rates", "frpe", "simulator", "controls",
                "cascade", "logic_tree", "thresholds", "validation"},
               "config root");

  Config config;
  config.base_dir = path.has_parent_path() ? path.parent_path() : ".";
  config.config_hash = fnv1a_hash(root.dump());

  if (!root.contains("data") || !root["data"].is_object())
    throw ConfigError("config needs a \"data\" section");
  {
    const json& data = root["data"];
    require_keys(data,
                 {"catalogue", "registry", "generation", "incidents", "states", "pairs",
                  "priors"},
                 "data");
    for (const char* key : {"catalogue", "registry", "generation", "incidents", "states"})
      if (string_or(data, key, "").empty())
        throw ConfigError(std::string("config data section is missing \"") + key + "\"");
    config.data.catalogue = resolve(config.base_dir, data["catalogue"]);
    config.data.registry = resolve(config.base_dir, data["registry"]);
    config.data.generation = resolve(config.base_dir, data["generation"]);
    config.data.incidents = resolve(config.base_dir, data["incidents"]);
    config.data.states = resolve(config.base_dir, data["states"]);
    config.data.pairs = resolve(config.base_dir, string_or(data, "pairs", ""));
    config.data.priors = resolve(config.base_dir, string_or(data, "priors", ""));
  }

  if (root.contains("pmf")) {
    const json& pmf = root["pmf"];
    require_keys(pmf, {"bin_width_mw", "min_samples"}, "pmf");
    config.pmf_bin_width_mw = number_or(pmf, "bin_width_mw", config.pmf_bin_width_mw);
    const double min_samples = number_or(pmf, "min_samples", 100.0);
    if (min_samples < 1) throw ConfigError("pmf.min_samples must be at least 1");
    config.pmf_min_samples = static_cast<std::size_t>(min_samples);
    if (!(config.pmf_bin_width_mw > 0.0))
      throw ConfigError("pmf.bin_width_mw must be positive");
  }

  if (root.contains("states")) {
    const json& states = root["states"];
    require_keys(states, {"n_bins", "weights"}, "states");
    config.state_bins = static_cast<int>(number_or(states, "n_bins", config.state_bins));
    if (config.state_bins < 1) throw ConfigError("states.n_bins must be at least 1");
    if (states.contains("weights")) {
      const json& weights = states["weights"];
      require_keys(weights, {"inertia", "demand", "response"}, "states.weights");
      config.metric_weights.inertia =
          number_or(weights, "inertia", config.metric_weights.inertia);
      config.metric_weights.demand =
          number_or(weights, "demand", config.metric_weights.demand);
      config.metric_weights.response =
          number_or(weights, "response", config.metric_weights.response);
    }
  }

  if (root.contains("rates")) {
    const json& rates = root["rates"];
    require_keys(rates, {"catch_all_source", "observation_years"}, "rates");
    config.catch_all_source = string_or(rates, "catch_all_source", "");
    config.observation_years =
        number_or(rates, "observation_years", config.observation_years);
  }

  if (root.contains("frpe")) {
    const json& frpe = root["frpe"];
    require_keys(frpe,
                 {"engine", "sigma0", "grid_cache", "f0", "load_damping_pct_per_hz",
                  "droop", "tau_r_s", "bias"},
                 "frpe");
    config.engine = parse_frpe_kind(string_or(frpe, "engine", "physics"));
    config.sigma0 = number_or(frpe, "sigma0", config.sigma0);
    config.grid_cache = resolve(config.base_dir, string_or(frpe, "grid_cache", ""));
    config.sfr.f0 = number_or(frpe, "f0", config.sfr.f0);
    config.sfr.load_damping_pct_per_hz =
        number_or(frpe, "load_damping_pct_per_hz", config.sfr.load_damping_pct_per_hz);
    config.sfr.droop = number_or(frpe, "droop", config.sfr.droop);
    config.sfr.tau_r_s = number_or(frpe, "tau_r_s", config.sfr.tau_r_s);
    config.sfr.bias = number_or(frpe, "bias", config.sfr.bias);
    if (!(config.sigma0 > 0.0)) throw ConfigError("frpe.sigma0 must be positive");
  }

  if (root.contains("simulator")) {
    const json& sim = root["simulator"];
    require_keys(sim, {"step_s", "horizon_s", "load_damping_coeff", "governor", "dc"},
                 "simulator");
    config.simulator.step_s = number_or(sim, "step_s", config.simulator.step_s);
    config.simulator.horizon_s = number_or(sim, "horizon_s", config.simulator.horizon_s);
    config.simulator.load_damping_coeff =
        number_or(sim, "load_damping_coeff", config.simulator.load_damping_coeff);
    if (sim.contains("governor")) {
      const json& gov = sim["governor"];
      require_keys(gov, {"delay_s", "ramp_s", "droop"}, "simulator.governor");
      config.simulator.governor.delay_s =
          number_or(gov, "delay_s", config.simulator.governor.delay_s);
      config.simulator.governor.ramp_s =
          number_or(gov, "ramp_s", config.simulator.governor.ramp_s);
      config.simulator.governor.droop =
          number_or(gov, "droop", config.simulator.governor.droop);
    }
    if (sim.contains("dc")) {
      const json& dc = sim["dc"];
      require_keys(dc,
                   {"deadband_hz", "full_delivery_hz", "delay_s", "ramp_s",
                    "creep_fraction", "creep_ramp_s"},
                   "simulator.dc");
      config.simulator.dc.deadband_hz =
          number_or(dc, "deadband_hz", config.simulator.dc.deadband_hz);
      config.simulator.dc.full_delivery_hz =
          number_or(dc, "full_delivery_hz", config.simulator.dc.full_delivery_hz);
      config.simulator.dc.delay_s = number_or(dc, "delay_s", config.simulator.dc.delay_s);
      config.simulator.dc.ramp_s = number_or(dc, "ramp_s", config.simulator.dc.ramp_s);
      config.simulator.dc.creep_fraction =
          number_or(dc, "creep_fraction", config.simulator.dc.creep_fraction);
      config.simulator.dc.creep_ramp_s =
          number_or(dc, "creep_ramp_s", config.simulator.dc.creep_ramp_s);
    }
    config.simulator.validate();
  }

  if (root.contains("controls")) {
    const json& controls = root["controls"];
    require_keys(controls, {"mode", "dc", "lfdd"}, "controls");
    config.controls = parse_controls_mode(string_or(controls, "mode", "both"));
    if (controls.contains("dc")) {
      const json& dc = controls["dc"];
      require_keys(dc, {"contracted_mw", "effectiveness", "use_state_volume"},
                   "controls.dc");
      config.dc.contracted_mw = number_or(dc, "contracted_mw", config.dc.contracted_mw);
      config.dc.effectiveness = number_or(dc, "effectiveness", config.dc.effectiveness);
      config.use_state_dc = bool_or(dc, "use_state_volume", config.use_state_dc);
      config.dc.validate();
    }
    if (controls.contains("lfdd")) {
      const json& lfdd = controls["lfdd"];
      require_keys(lfdd, {"relay_effectiveness", "stage_credit", "stages", "enabled"},
                   "controls.lfdd");
      config.lfdd.relay_effectiveness =
          number_or(lfdd, "relay_effectiveness", config.lfdd.relay_effectiveness);
      config.lfdd.stage_credit = number_or(lfdd, "stage_credit", config.lfdd.stage_credit);
      config.lfdd.enabled = bool_or(lfdd, "enabled", config.lfdd.enabled);
      if (lfdd.contains("stages")) {
        if (!lfdd["stages"].is_array())
          throw ConfigError("controls.lfdd.stages must be an array");
        config.lfdd.stages.clear();
        for (const auto& stage : lfdd["stages"]) {
          require_keys(stage, {"activation_deviation_hz", "shed_fraction"},
                       "controls.lfdd.stages");
          config.lfdd.stages.push_back({number_or(stage, "activation_deviation_hz", 0.0),
                                        number_or(stage, "shed_fraction", 0.0)});
        }
      }
      config.lfdd.validate();
    }
  }

  if (root.contains("cascade")) {
    const json& cascade = root["cascade"];
    require_keys(cascade, {"enabled", "rocof_threshold_hz_per_s", "p_cond", "der_loss_mw"},
                 "cascade");
    config.cascade_enabled = bool_or(cascade, "enabled", false);
    config.cascade.rocof_threshold_hz_per_s = number_or(
        cascade, "rocof_threshold_hz_per_s", config.cascade.rocof_threshold_hz_per_s);
    config.cascade.p_cond = number_or(cascade, "p_cond", config.cascade.p_cond);
    config.cascade.der_loss_mw =
        number_or(cascade, "der_loss_mw", config.cascade.der_loss_mw);
    config.cascade.validate();
  }

  if (root.contains("logic_tree")) {
    const json& tree = root["logic_tree"];
    require_keys(tree,
                 {"frpe", "sigma0", "bias", "occurrence", "dc_effectiveness",
                  "lfdd_effectiveness", "compound_rate_multiplier"},
                 "logic_tree");
    if (tree.contains("frpe")) {
      config.tree.frpe.clear();
      for (const auto& item : tree["frpe"]) {
        require_keys(item, {"engine", "weight"}, "logic_tree.frpe");
        config.tree.frpe.push_back({parse_frpe_kind(string_or(item, "engine", "sfr")),
                                    number_or(item, "weight", 0.0)});
      }
    }
    if (tree.contains("sigma0")) config.tree.sigma0 = value_branches(tree["sigma0"], "sigma0");
    if (tree.contains("bias")) config.tree.bias = value_branches(tree["bias"], "bias");
    if (tree.contains("occurrence")) {
      config.tree.occurrence.clear();
      for (const auto& item : tree["occurrence"]) {
        require_keys(item, {"model", "weight"}, "logic_tree.occurrence");
        const std::string model = string_or(item, "model", "poisson");
        if (model != "poisson" && model != "compound")
          throw ConfigError("unknown occurrence model: " + model);
        config.tree.occurrence.push_back(
            {model == "poisson" ? OccurrenceModel::poisson : OccurrenceModel::compound,
             number_or(item, "weight", 0.0)});
      }
    }
    if (tree.contains("dc_effectiveness"))
      config.tree.dc_effectiveness =
          value_branches(tree["dc_effectiveness"], "dc_effectiveness");
    if (tree.contains("lfdd_effectiveness"))
      config.tree.lfdd_effectiveness =
          value_branches(tree["lfdd_effectiveness"], "lfdd_effectiveness");
    config.tree.compound_rate_multiplier =
        number_or(tree, "compound_rate_multiplier", config.tree.compound_rate_multiplier);
    config.tree.validate();
  }

  if (root.contains("thresholds")) {
    const json& thresholds = root["thresholds"];
    require_keys(thresholds, {"lo_hz", "hi_hz", "step_hz", "explicit"}, "thresholds");
    config.thresholds_lo_hz = number_or(thresholds, "lo_hz", config.thresholds_lo_hz);
    config.thresholds_hi_hz = number_or(thresholds, "hi_hz", config.thresholds_hi_hz);
    config.thresholds_step_hz = number_or(thresholds, "step_hz", config.thresholds_step_hz);
    if (thresholds.contains("explicit")) {
      if (!thresholds["explicit"].is_array())
        throw ConfigError("thresholds.explicit must be an array");
      for (const auto& v : thresholds["explicit"])
        config.explicit_thresholds_hz.push_back(v.get<double>());
    }
  }

  if (root.contains("validation")) {
    const json& validation = root["validation"];
    require_keys(validation, {"split_timestamp", "replay_demand_gw", "replay_response_mw"},
                 "validation");
    config.split_timestamp = string_or(validation, "split_timestamp", "");
    config.replay_demand_gw =
        number_or(validation, "replay_demand_gw", config.replay_demand_gw);
    config.replay_response_mw =
        number_or(validation, "replay_response_mw", config.replay_response_mw);
  }

  // Fail fast on an unusable threshold request.
  (void)config.thresholds();
  return config;
}

}  // namespace pfha
