#include "pfha/pipeline.hpp"

#include <fstream>

#include <json.hpp>

#include "pfha/csv.hpp"
#include "pfha/mathutil.hpp"

namespace pfha {

GridProvider obtain_grid(const SimConfig& sim, const GridAxes& axes,
                         const std::filesystem::path& cache_path, int threads) {
  GridProvider provider;
  provider.cache_path = cache_path;
  const std::uint64_t want = grid_config_hash(sim, axes);
  if (std::filesystem::exists(cache_path)) {
    try {
      NadirGrid cached = NadirGrid::load(cache_path);
      if (cached.config_hash() == want) {
        provider.grid = std::move(cached);
        provider.cache_hit = true;
        return provider;
      }
      warn("grid cache " + cache_path.string() + " was built from a different "
           "simulator configuration; rebuilding");
    } catch (const DataError& e) {
      warn(std::string("grid cache unreadable, rebuilding: ") + e.what());
    }
  }
  NadirGrid built = build_grid(sim, axes, threads);
  provider.simulations = built.primary_points();
  built.save(cache_path);
  // Reload so every consumer sees the file-rounded values, first run or not.
  provider.grid = NadirGrid::load(cache_path);
  return provider;
}

Pipeline load_pipeline(const Config& config, int threads, bool need_grid) {
  Pipeline pipe;
  pipe.config = config;

  pipe.catalogue = load_catalogue(config.data.catalogue, config.data.registry);
  attach_generation_pmfs(pipe.catalogue, config.data.generation, config.pmf_bin_width_mw,
                         config.pmf_min_samples);

  pipe.incidents = load_incidents(config.data.incidents);
  pipe.priors = config.data.priors.empty() ? default_priors()
                                           : load_priors(config.data.priors);
  const auto counts = count_incidents(pipe.incidents, config.observation_years,
                                      config.catch_all_source);
  apply_rates(pipe.catalogue, pipe.priors, counts);

  if (!config.data.pairs.empty()) {
    std::vector<SourceRecord> pair_sources;
    for (const auto& spec : load_pairs(config.data.pairs)) {
      if (pipe.catalogue.find(spec.pair_id) != nullptr)
        throw DataError("pair id collides with an existing source: " + spec.pair_id);
      pair_sources.push_back(build_pair_source(spec, pipe.catalogue));
    }
    for (auto& source : pair_sources)
      pipe.catalogue.sources.push_back(std::move(source));
  }

  pipe.states = load_states(config.data.states);
  pipe.bins = quantile_bin(pipe.states, config.state_bins, config.metric_weights);

  if (config.use_state_dc) {
    for (const auto& record : pipe.states)
      if (record.dc_contracted_mw > 0.0) {
        pipe.state_dc_available = true;
        break;
      }
    if (!pipe.state_dc_available)
      warn("state records carry no DC volumes; falling back to the configured "
           "contracted volume");
  }

  if (need_grid) {
    const std::filesystem::path cache = config.grid_cache.empty()
                                            ? config.base_dir / "nadir_grid.txt"
                                            : config.grid_cache;
    pipe.grid = obtain_grid(config.simulator, GridAxes::defaults(), cache, threads);
    pipe.has_grid = true;
  }
  return pipe;
}

HazardInputs Pipeline::base_inputs() const {
  HazardInputs in;
  in.catalogue = &catalogue;
  in.state_bins = &bins;
  in.frpe = config.engine;
  in.sfr = config.sfr;
  in.sigma = config.engine == FrpeKind::sfr ? SigmaParams::analytical(config.sigma0)
                                            : SigmaParams::physics(config.sigma0);
  in.grid = has_grid ? &grid.grid : nullptr;
  in.dc = config.dc;
  in.use_state_dc = config.use_state_dc && state_dc_available;
  in.lfdd = config.lfdd;
  in.controls = config.controls;
  in.cascade = config.cascade_enabled ? &config.cascade : nullptr;
  in.thresholds_hz = config.thresholds();
  return in;
}

std::string provenance_line(const Config& config) {
  return std::string("# pfha ") + kToolVersion + " config_hash=" + config.hash_hex();
}

namespace {

std::ofstream open_table(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write output file: " + path.string());
  return out;
}

}  // namespace

void write_hazard_outputs(const std::filesystem::path& out_dir, const Config& config,
                          const std::vector<double>& thresholds, const TreeResult& tree) {
  {
    auto out = open_table(out_dir / "hazard_curve.csv");
    out << provenance_line(config) << "\n";
    out << "threshold_hz,rate_per_yr,return_period_yr\n";
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      const double rate = tree.fractiles[t].mean;
      out << format_g9(thresholds[t]) << "," << format_g9(rate) << ","
          << (rate > 0.0 ? format_g9(1.0 / rate) : "inf") << "\n";
    }
  }
  {
    auto out = open_table(out_dir / "fractiles.csv");
    out << provenance_line(config) << "\n";
    out << "threshold_hz,mean,p05,median,p95\n";
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      const FractileRow& row = tree.fractiles[t];
      out << format_g9(thresholds[t]) << "," << format_g9(row.mean) << ","
          << format_g9(row.p05) << "," << format_g9(row.median) << ","
          << format_g9(row.p95) << "\n";
    }
  }
  {
    auto out = open_table(out_dir / "per_path_rates.csv");
    out << provenance_line(config) << "\n";
    out << "path_index,frpe,sigma0,bias,occurrence,dc_effectiveness,lfdd_effectiveness,"
           "weight";
    for (double t : thresholds) out << ",rate_at_" << format_g9(t);
    out << "\n";
    for (std::size_t p = 0; p < tree.paths.size(); ++p) {
      const LogicTreePath& path = tree.paths[p];
      out << path.index << "," << to_string(path.frpe) << "," << format_g9(path.sigma0)
          << "," << format_g9(path.bias) << "," << to_string(path.occurrence) << ","
          << format_g9(path.dc_effectiveness) << ","
          << format_g9(path.lfdd_effectiveness) << "," << format_g9(path.weight);
      for (double rate : tree.path_rates[p]) out << "," << format_g9(rate);
      out << "\n";
    }
  }
}

void write_defence_value(const std::filesystem::path& out_dir, const Config& config,
                         const std::vector<double>& thresholds,
                         const std::vector<DecompositionRow>& rows) {
  auto out = open_table(out_dir / "defence_value.csv");
  out << provenance_line(config) << "\n";
  out << "controls_mode,threshold_hz,rate_per_yr,reduction_vs_none\n";
  const DecompositionRow* none = nullptr;
  for (const auto& row : rows)
    if (row.mode == ControlsMode::none) none = &row;
  for (const auto& row : rows) {
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      double reduction = 0.0;
      if (none != nullptr && none->rates_per_yr[t] > 0.0)
        reduction = 1.0 - row.rates_per_yr[t] / none->rates_per_yr[t];
      out << to_string(row.mode) << "," << format_g9(thresholds[t]) << ","
          << format_g9(row.rates_per_yr[t]) << "," << format_g9(reduction) << "\n";
    }
  }
}

void write_summary_json(const std::filesystem::path& out_dir, const Config& config,
                        const std::vector<double>& thresholds, const TreeResult& tree) {
  nlohmann::ordered_json root;
  root["tool"] = "pfha";
  root["version"] = kToolVersion;
  root["config_hash"] = config.hash_hex();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    const FractileRow& row = tree.fractiles[t];
    nlohmann::ordered_json entry;
    entry["threshold_hz"] = thresholds[t];
    entry["mean_rate_per_yr"] = row.mean;
    entry["median_rate_per_yr"] = row.median;
    entry["p05_rate_per_yr"] = row.p05;
    entry["p95_rate_per_yr"] = row.p95;
    if (row.mean > 0.0) entry["return_period_yr"] = 1.0 / row.mean;
    rows.push_back(std::move(entry));
  }
  root["thresholds"] = std::move(rows);
  auto out = open_table(out_dir / "summary.json");
  out << root.dump(2) << "\n";
}

void write_disagg(const std::filesystem::path& out_file, const Config& config,
                  const std::vector<DisaggCell>& cells) {
  auto out = open_table(out_file);
  out << provenance_line(config) << "\n";
  if (cells.empty()) {
    out << "fraction,mean_epsilon,contribution_per_yr\n";
    return;
  }
  for (const auto& key : cells.front().keys) out << key.column << ",";
  out << "fraction,mean_epsilon,contribution_per_yr\n";
  for (const auto& cell : cells) {
    for (const auto& key : cell.keys) out << key.value << ",";
    out << format_g9(cell.fraction) << "," << format_g9(cell.mean_epsilon) << ","
        << format_g9(cell.contribution_per_yr) << "\n";
  }
}

void write_tornado(const std::filesystem::path& out_file, const Config& config,
                   const std::vector<TornadoRow>& rows) {
  auto out = open_table(out_file);
  out << provenance_line(config) << "\n";
  out << "branch,low_rate_per_yr,high_rate_per_yr,swing\n";
  for (const auto& row : rows)
    out << row.branch << "," << format_g9(row.low_rate) << ","
        << format_g9(row.high_rate) << "," << format_g9(row.swing) << "\n";
}

}  // namespace pfha
