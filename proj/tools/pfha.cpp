#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "pfha/csv.hpp"
#include "pfha/pipeline.hpp"
#include "pfha/synth.hpp"

namespace {

using namespace pfha;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::string thresholds;
  std::string controls;
  std::string cascade;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_config = true) {
  auto* config =
      cmd->add_option("--config", opts.config_path, "Path to the scenario config file")
          ->envname("PFHA_CONFIG");
  if (needs_config) config->required();
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--thresholds", opts.thresholds,
                  "Comma-separated deviation thresholds in Hz (overrides the config grid)");
  cmd->add_option("--threads", opts.threads, "Worker thread cap (0 = hardware)");
  cmd->add_option("--controls", opts.controls, "Controls mode: none|dc|lfdd|both")
      ->check(CLI::IsMember({"none", "dc", "lfdd", "both"}));
  cmd->add_option("--cascade", opts.cascade, "Cascade expansion: on|off")
      ->check(CLI::IsMember({"on", "off"}));
}

Config load_with_overrides(const CommonOpts& opts) {
  Config config = load_config(opts.config_path);
  if (!opts.thresholds.empty()) {
    config.explicit_thresholds_hz.clear();
    for (const auto& token : split(opts.thresholds, ','))
      config.explicit_thresholds_hz.push_back(parse_double(token, "--thresholds"));
  }
  if (!opts.controls.empty()) config.controls = parse_controls_mode(opts.controls);
  if (!opts.cascade.empty()) config.cascade_enabled = opts.cascade == "on";
  return config;
}

std::filesystem::path ensure_out_dir(const std::string& dir) {
  std::filesystem::path path(dir);
  std::filesystem::create_directories(path);
  return path;
}

int cmd_compute(const CommonOpts& opts) {
  const Config config = load_with_overrides(opts);
  const Pipeline pipe = load_pipeline(config, opts.threads, true);
  const HazardInputs base = pipe.base_inputs();
  const std::vector<double> thresholds = base.thresholds_hz;

  const TreeResult tree = evaluate_tree(config.tree, base, opts.threads);
  const std::vector<DecompositionRow> decomposition = run_configuration(base);

  const auto out_dir = ensure_out_dir(opts.out_dir);
  write_hazard_outputs(out_dir, config, thresholds, tree);
  write_defence_value(out_dir, config, thresholds, decomposition);
  write_summary_json(out_dir, config, thresholds, tree);

  std::cout << "paths evaluated: " << tree.paths.size() << " ("
            << tree.distinct_evaluations << " distinct)\n";
  std::cout << "outputs written to " << out_dir.string() << "\n";
  return 0;
}

int cmd_disagg(const CommonOpts& opts, double threshold_hz, const std::string& dimension) {
  const Config config = load_with_overrides(opts);
  const Pipeline pipe = load_pipeline(config, opts.threads, true);
  HazardInputs in = pipe.base_inputs();
  in.thresholds_hz = {threshold_hz};
  in.keep_cells = true;
  const HazardResult result = compute_hazard(in);
  const DisaggDimension dim = parse_disagg_dimension(dimension);
  const auto cells = disaggregate(result, pipe.bins, threshold_hz, dim);

  const auto out_dir = ensure_out_dir(opts.out_dir);
  const auto out_file = out_dir / ("disagg_" + to_string(dim) + ".csv");
  write_disagg(out_file, config, cells);
  std::cout << cells.size() << " " << to_string(dim) << " groups at "
            << format_g9(threshold_hz) << " Hz -> " << out_file.string() << "\n";
  return 0;
}

int cmd_tornado(const CommonOpts& opts, double threshold_hz) {
  const Config config = load_with_overrides(opts);
  const Pipeline pipe = load_pipeline(config, opts.threads, true);
  const auto rows = tornado(config.tree, pipe.base_inputs(), threshold_hz);

  const auto out_dir = ensure_out_dir(opts.out_dir);
  write_tornado(out_dir / "tornado.csv", config, rows);
  std::printf("%-20s %14s %14s %8s\n", "branch", "low", "high", "swing");
  for (const auto& row : rows)
    std::printf("%-20s %14.6g %14.6g %8.3g\n", row.branch.c_str(), row.low_rate,
                row.high_rate, row.swing);
  return 0;
}

int cmd_validate(const CommonOpts& opts) {
  const Config config = load_with_overrides(opts);
  const Pipeline pipe = load_pipeline(config, opts.threads, true);
  const auto out_dir = ensure_out_dir(opts.out_dir);

  const auto anchors = anchor_report();
  {
    std::ofstream out(out_dir / "validation_anchors.csv", std::ios::binary);
    out << provenance_line(config) << "\n";
    out << "check,value,expected_lo,expected_hi,pass\n";
    for (const auto& a : anchors)
      out << a.name << "," << format_g9(a.value) << "," << format_g9(a.expected_lo)
          << "," << format_g9(a.expected_hi) << "," << (a.pass ? "1" : "0") << "\n";
  }
  std::size_t failed = 0;
  for (const auto& a : anchors) {
    std::printf("%-52s %12.6g  [%g, %g]  %s\n", a.name.c_str(), a.value, a.expected_lo,
                a.expected_hi, a.pass ? "pass" : "FAIL");
    if (!a.pass) ++failed;
  }

  if (pipe.incidents.empty())
    throw DataError("incident history is empty; nothing to validate");
  std::int64_t split_epoch;
  if (!config.split_timestamp.empty()) {
    split_epoch = parse_iso8601(config.split_timestamp);
  } else {
    std::int64_t lo = pipe.incidents.front().timestamp_epoch_s, hi = lo;
    for (const auto& inc : pipe.incidents) {
      lo = std::min(lo, inc.timestamp_epoch_s);
      hi = std::max(hi, inc.timestamp_epoch_s);
    }
    split_epoch = lo + static_cast<std::int64_t>(0.75 * static_cast<double>(hi - lo));
  }
  const SplitResult split = temporal_split(pipe.base_inputs(), pipe.incidents, pipe.priors,
                                           config.catch_all_source, split_epoch);
  {
    std::ofstream out(out_dir / "validation_split.csv", std::ios::binary);
    out << provenance_line(config) << "\n";
    out << "threshold_hz,training_rate_per_yr,full_rate_per_yr,ratio,stable\n";
    for (std::size_t t = 0; t < split.thresholds_hz.size(); ++t)
      out << format_g9(split.thresholds_hz[t]) << "," << format_g9(split.training_rates[t])
          << "," << format_g9(split.full_rates[t]) << "," << format_g9(split.ratios[t])
          << "," << (split.stable[t] ? "1" : "0") << "\n";
  }
  std::size_t stable = 0;
  for (bool s : split.stable) stable += s ? 1 : 0;
  std::printf("temporal split %s: %zu training / %zu test events, %zu/%zu thresholds "
              "within [0.5, 2.0]\n",
              format_iso8601(split_epoch).c_str(), split.training.size(),
              split.test.size(), stable, split.stable.size());

  std::vector<ReplayEvent> events;
  for (const auto& inc : pipe.incidents) {
    ReplayEvent ev;
    ev.rocof_hz_per_s = inc.rocof_hz_per_s;
    ev.inertia_gva_s = inc.inertia_gva_s;
    ev.observed_nadir_hz = inc.nadir_deviation_hz;
    ev.actual_mw = inc.actual_mw;
    ev.demand_gw = config.replay_demand_gw;
    ev.response_mw = config.replay_response_mw;
    events.push_back(ev);
  }
  const FrpeComparison comparison = frpe_compare(events, config.sfr, pipe.grid.grid);
  {
    std::ofstream out(out_dir / "validation_frpe.csv", std::ios::binary);
    out << provenance_line(config) << "\n";
    out << "model,mean_log_residual,bias_factor,residual_stdev,mae_hz,events_used\n";
    for (const auto& [name, m] :
         {std::pair{"sfr_raw", &comparison.sfr_raw}, std::pair{"physics", &comparison.physics}})
      out << name << "," << format_g9(m->mean_log_residual) << ","
          << format_g9(m->bias_factor) << "," << format_g9(m->residual_stdev) << ","
          << format_g9(m->mae_hz) << "," << m->events_used << "\n";
  }
  std::printf("replay bias factors: raw analytical %.3g, physics %.3g (%zu events)\n",
              comparison.sfr_raw.bias_factor, comparison.physics.bias_factor,
              comparison.sfr_raw.events_used);

  if (failed > 0) std::printf("%zu reference checks FAILED\n", failed);
  return 0;
}

int cmd_grid_build(const CommonOpts& opts) {
  const Config config = load_with_overrides(opts);
  const std::filesystem::path cache = config.grid_cache.empty()
                                          ? config.base_dir / "nadir_grid.txt"
                                          : config.grid_cache;
  const GridProvider provider =
      obtain_grid(config.simulator, GridAxes::defaults(), cache, opts.threads);
  if (provider.cache_hit)
    std::cout << "cache hit: " << cache.string() << " (0 simulations)\n";
  else
    std::cout << "built " << provider.grid.total_points() << " grid points ("
              << provider.simulations << " simulations) -> " << cache.string() << "\n";
  return 0;
}

int cmd_synth(const std::string& out_dir, std::uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;
  const SynthSummary summary = generate_synthetic(spec, out_dir);
  std::cout << "synthetic scenario written to " << out_dir << ": " << summary.sources
            << " sources, " << summary.generation_rows << " generation rows, "
            << summary.states << " states, " << summary.incidents << " incidents, "
            << summary.pairs << " pairs\n";
  std::cout << "config: " << summary.config_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic frequency-deviation hazard analysis"};
  app.require_subcommand(1);

  CommonOpts opts;
  double disagg_threshold = 0.8;
  std::string disagg_dimension = "source";
  double tornado_threshold = 0.8;
  std::string synth_out = "synthetic";
  std::uint64_t synth_seed = 1;

  auto* compute = app.add_subcommand("compute", "Run the full hazard pipeline");
  add_common(compute, opts);
  auto* disagg = app.add_subcommand("disagg", "Disaggregate the hazard at one threshold");
  add_common(disagg, opts);
  disagg->add_option("--threshold", disagg_threshold, "Deviation threshold in Hz");
  disagg->add_option("--dimension", disagg_dimension,
                     "source|loss_size|state|epsilon|size_inertia_epsilon|size_demand");
  auto* tornado_cmd = app.add_subcommand("tornado", "One-at-a-time branch sensitivity");
  add_common(tornado_cmd, opts);
  tornado_cmd->add_option("--threshold", tornado_threshold, "Deviation threshold in Hz");
  auto* validate = app.add_subcommand("validate", "Reference checks and replay harness");
  add_common(validate, opts);
  auto* grid_build = app.add_subcommand("grid-build", "Build or refresh the nadir grid");
  add_common(grid_build, opts);
  auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario");
  synth->add_option("--out", synth_out, "Output directory for the dataset");
  synth->add_option("--seed", synth_seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (compute->parsed()) return cmd_compute(opts);
    if (disagg->parsed()) return cmd_disagg(opts, disagg_threshold, disagg_dimension);
    if (tornado_cmd->parsed()) return cmd_tornado(opts, tornado_threshold);
    if (validate->parsed()) return cmd_validate(opts);
    if (grid_build->parsed()) return cmd_grid_build(opts);
    if (synth->parsed()) return cmd_synth(synth_out, synth_seed);
  } catch (const pfha::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const pfha::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const pfha::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
