#ifndef PFHA_CONFIG_HPP
#define PFHA_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pfha/controls.hpp"
#include "pfha/layers.hpp"
#include "pfha/logictree.hpp"
#include "pfha/physics.hpp"
#include "pfha/sfr.hpp"
#include "pfha/state.hpp"

namespace pfha {

inline constexpr const char* kToolVersion = "1.0.0";

struct DataPaths {
  std::filesystem::path catalogue;
  std::filesystem::path registry;
  std::filesystem::path generation;
  std::filesystem::path incidents;
  std::filesystem::path states;
  std::filesystem::path pairs;   // optional: empty disables pair sources
  std::filesystem::path priors;  // optional: empty keeps the defaults
};

struct Config {
  DataPaths data;

  double pmf_bin_width_mw = 25.0;
  std::size_t pmf_min_samples = 100;

  int state_bins = 50;
  MetricWeights metric_weights;

  std::string catch_all_source;
  double observation_years = 0.0;  // <= 0 infers the window from the incidents

  FrpeKind engine = FrpeKind::physics;
  SfrParams sfr;
  double sigma0 = 0.296;  // central value; logic-tree branches override per path
  SimConfig simulator;
  std::filesystem::path grid_cache;  // empty: grid lives beside the config

  DcConfig dc;
  bool use_state_dc = true;
  LfddConfig lfdd = LfddConfig::defaults();
  ControlsMode controls = ControlsMode::both;

  CascadeSpec cascade;
  bool cascade_enabled = false;

  LogicTreeSpec tree = LogicTreeSpec::defaults();

  double thresholds_lo_hz = 0.05;
  double thresholds_hi_hz = 2.2;
  double thresholds_step_hz = 0.05;
  std::vector<double> explicit_thresholds_hz;  // overrides the grid when set

  std::string split_timestamp;  // empty: 75% point of the incident window
  double replay_demand_gw = 28.0;
  double replay_response_mw = 1500.0;

  std::uint64_t config_hash = 0;
  std::filesystem::path base_dir;

  std::vector<double> thresholds() const;
  std::string hash_hex() const;
};

Config load_config(const std::filesystem::path& path);

}  // namespace pfha

#endif
