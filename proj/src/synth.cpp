#include "pfha/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

#include "pfha/common.hpp"
#include "pfha/csv.hpp"
#include "pfha/mathutil.hpp"
#include "pfha/sfr.hpp"

namespace pfha {

namespace {

struct SourceTemplate {
  const char* id;
  const char* type;
  const char* prior_class;
  double capacity_mw;
  double max_credible_loss_mw;
  std::vector<const char*> bmus;
  double load_factor;
  double outage_prob;   // chance a settlement period records zero output
  double trip_rate_per_yr;  // generating rate for synthetic incidents
};

const std::vector<SourceTemplate>& source_templates() {
  static const std::vector<SourceTemplate> templates = {
      {"CCGT-A", "ccgt", "ccgt", 710, 710, {"T_CCGTA-1"}, 0.80, 0.15, 0.60},
      {"CCGT-B", "ccgt", "ccgt", 840, 840, {"T_CCGTB-1", "T_CCGTB-2"}, 0.78, 0.18, 0.50},
      {"CCGT-C", "ccgt", "ccgt", 620, 620, {"T_CCGTC-1"}, 0.75, 0.20, 0.40},
      {"NUC-A", "nuclear", "nuclear", 1190, 1190, {"T_NUCA-1", "T_NUCA-2"}, 0.94, 0.06, 0.25},
      {"IC-EAST", "interconnector", "interconnector", 1000, 1000, {"I_ICEAST"}, 0.72, 0.10, 0.90},
      {"IC-WEST", "interconnector", "interconnector", 1400, 1400, {"I_ICWEST"}, 0.70, 0.12, 0.70},
      {"BIO-A", "biomass", "biomass", 650, 650, {"T_BIOA-1"}, 0.85, 0.10, 0.35},
      {"BIO-B", "biomass", "biomass", 420, 420, {"T_BIOB-1"}, 0.83, 0.12, 0.30},
      {"PS-A", "pumped_storage", "pumped_storage", 380, 380, {"T_PSA-1"}, 0.45, 0.35, 0.20},
      {"WIND-A", "wind", "wind", 900, 540, {"W_WINDA-1"}, 0.52, 0.08, 0.25},
      {"WIND-B", "wind", "wind", 1100, 660, {"W_WINDB-1"}, 0.55, 0.08, 0.25},
      {"FLEET", "fleet_catchall", "ccgt", 600, 600, {"F_FLEET-1"}, 0.65, 0.10, 0.30},
  };
  return templates;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw DataError("cannot write synthetic file: " + path.string());
  return out;
}

constexpr std::int64_t kHalfHourS = 1800;

}  // namespace

SynthSummary generate_synthetic(const SynthSpec& spec,
                                const std::filesystem::path& out_dir) {
  if (spec.n_states < 2 || spec.generation_periods < 200)
    throw ConfigError("synthetic scenario needs at least 2 states and 200 periods");
  std::filesystem::create_directories(out_dir);
  Rng rng(spec.seed);
  SynthSummary summary;

  const auto& templates = source_templates();
  summary.sources = templates.size();

  {
    auto out = open_out(out_dir / "catalogue.csv");
    out << "source_id,source_type,capacity_mw,max_credible_loss_mw,prior_class,bmu_ids\n";
    for (const auto& t : templates) {
      out << t.id << "," << t.type << "," << format_g9(t.capacity_mw) << ","
          << format_g9(t.max_credible_loss_mw) << "," << t.prior_class << ",";
      for (std::size_t b = 0; b < t.bmus.size(); ++b)
        out << (b ? ";" : "") << t.bmus[b];
      out << "\n";
    }
  }

  {
    auto out = open_out(out_dir / "registry.csv");
    out << "bmu_id,source_id\n";
    for (const auto& t : templates)
      for (const char* bmu : t.bmus) out << bmu << "," << t.id << "\n";
  }

  {
    const std::int64_t start = parse_iso8601("2015-06-01T00:00:00");
    auto out = open_out(out_dir / "generation.csv");
    out << "bmu_id,timestamp_iso8601,output_mw\n";
    for (const auto& t : templates) {
      std::vector<double> bmu_share(t.bmus.size());
      double share_sum = 0.0;
      for (auto& share : bmu_share) {
        share = 1.0 + 0.05 * rng.normal();
        share_sum += share;
      }
      for (auto& share : bmu_share) share /= share_sum;
      for (std::size_t p = 0; p < spec.generation_periods; ++p) {
        const std::int64_t ts = start + static_cast<std::int64_t>(p) * kHalfHourS;
        const bool off = rng.uniform() < t.outage_prob;
        double total = 0.0;
        if (!off) {
          total = t.capacity_mw * t.load_factor * (1.0 + 0.10 * rng.normal());
          total = std::clamp(total, 0.0, t.capacity_mw);
        }
        for (std::size_t b = 0; b < t.bmus.size(); ++b) {
          out << t.bmus[b] << "," << format_iso8601(ts) << ","
              << format_g9(total * bmu_share[b]) << "\n";
          ++summary.generation_rows;
        }
      }
    }
  }

  {
    // Low inertia coincides with low demand: a shared latent factor gives the
    // two a design correlation of +0.5.
    const std::int64_t start = parse_iso8601("2019-01-01T00:00:00");
    auto out = open_out(out_dir / "states.csv");
    out << "timestamp_iso8601,inertia_gva_s,demand_gw,response_mw,dc_contracted_mw\n";
    for (std::size_t k = 0; k < spec.n_states; ++k) {
      const std::int64_t ts = start + static_cast<std::int64_t>(k) * kHalfHourS;
      const double z_shared = rng.normal();
      const double z_inertia = rng.normal();
      const double z_response = rng.normal();
      const double z_dc = rng.normal();
      const double demand = std::clamp(30.0 + 6.0 * z_shared, 16.0, 48.0);
      const double inertia = std::clamp(
          185.0 + 50.0 * (0.5 * z_shared + std::sqrt(0.75) * z_inertia), 85.0, 345.0);
      const double response =
          std::clamp(1100.0 + 260.0 * z_response + 0.18 * (inertia - 185.0), 500.0, 2900.0);
      const double dc = std::clamp(850.0 + 180.0 * z_dc, 100.0, 1400.0);
      out << format_iso8601(ts) << "," << format_g9(inertia) << "," << format_g9(demand)
          << "," << format_g9(response) << "," << format_g9(dc) << "\n";
      ++summary.states;
    }
  }

  {
    const std::int64_t start = parse_iso8601("2015-01-01T00:00:00");
    const double window_s = spec.observation_years * 365.25 * 86400.0;
    struct Row {
      std::int64_t ts;
      std::string source_id;
      double rocof, inertia, nadir;
      double actual_mw;  // < 0 means "not recorded"
    };
    std::vector<Row> rows;
    const SfrParams sfr;  // default bias
    auto draw_event = [&](const std::string& source_id, double loss_mw) {
      Row row;
      row.ts = start + static_cast<std::int64_t>(rng.uniform() * window_s);
      row.source_id = source_id;
      row.inertia = rng.uniform(110.0, 260.0);
      row.rocof = rocof_from_loss(loss_mw, row.inertia, sfr.f0);
      const double mu = sfr_median_nadir(loss_mw, row.inertia, 28.0, 1500.0, sfr);
      row.nadir = mu * std::exp(0.25 * rng.normal());
      row.actual_mw = rng.uniform() < 0.7 ? loss_mw : -1.0;
      rows.push_back(std::move(row));
    };
    for (const auto& t : templates) {
      const int n = rng.poisson(t.trip_rate_per_yr * spec.observation_years);
      for (int e = 0; e < n; ++e)
        draw_event(t.id, t.max_credible_loss_mw * rng.uniform(0.55, 1.0));
    }
    for (int e = 0; e < 3; ++e)  // embedded losses never matched to a source
      draw_event("", rng.uniform(200.0, 400.0));
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      return std::tie(a.ts, a.source_id) < std::tie(b.ts, b.source_id);
    });
    auto out = open_out(out_dir / "incidents.csv");
    out << "timestamp_iso8601,source_id,rocof_hz_per_s,inertia_gva_s,"
           "nadir_deviation_hz,actual_mw\n";
    for (const auto& row : rows) {
      out << format_iso8601(row.ts) << "," << row.source_id << ","
          << format_g9(row.rocof) << "," << format_g9(row.inertia) << ","
          << format_g9(row.nadir) << ","
          << (row.actual_mw >= 0.0 ? format_g9(row.actual_mw) : std::string{}) << "\n";
      ++summary.incidents;
    }
  }

  {
    auto out = open_out(out_dir / "pairs.csv");
    out << "pair_id,source_a,source_b,dependency,severity,rate_per_yr\n";
    out << "PAIR-CCGT-AC,CCGT-A,CCGT-C,common_cause,moderate,0.15\n";
    out << "PAIR-CCGT-AB,CCGT-A,CCGT-B,proximity,severe,\n";
    out << "PAIR-IC-EW,IC-EAST,IC-WEST,independent,extreme,\n";
    summary.pairs = 3;
  }

  {
    auto out = open_out(out_dir / "priors.csv");
    out << "prior_class,alpha,beta\n";
    out << "ccgt,1,0.454545455\n";
    out << "interconnector,1,0.145032632\n";
    out << "nuclear,1,1.12994350\n";
    out << "biomass,1,1.31578947\n";
    out << "pumped_storage,1,2.35294118\n";
    out << "wind,1,2.35294118\n";
  }

  {
    auto out = open_out(out_dir / "config.json");
    out << R"({
  "cascade": {
    "der_loss_mw": 350.0,
    "enabled": false,
    "p_cond": 0.3,
    "rocof_threshold_hz_per_s": 0.125
  },
  "controls": {
    "dc": {
      "contracted_mw": 1000.0,
      "effectiveness": 0.85,
      "use_state_volume": true
    },
    "lfdd": {
      "relay_effectiveness": 0.85,
      "stage_credit": 0.5
    },
    "mode": "both"
  },
  "data": {
    "catalogue": "catalogue.csv",
    "generation": "generation.csv",
    "incidents": "incidents.csv",
    "pairs": "pairs.csv",
    "priors": "priors.csv",
    "registry": "registry.csv",
    "states": "states.csv"
  },
  "frpe": {
    "engine": "physics",
    "grid_cache": "nadir_grid.txt"
  },
  "pmf": {
    "bin_width_mw": 25.0,
    "min_samples": 100
  },
  "rates": {
    "catch_all_source": "FLEET",
    "observation_years": )" << format_g9(spec.observation_years) << R"(
  },
  "states": {
    "n_bins": 50
  },
  "thresholds": {
    "hi_hz": 2.2,
    "lo_hz": 0.05,
    "step_hz": 0.05
  },
  "validation": {
    "replay_demand_gw": 28.0,
    "replay_response_mw": 1500.0,
    "split_timestamp": "2022-07-01T00:00:00"
  }
}
)";
    summary.config_path = out_dir / "config.json";
  }

  return summary;
}

}  // namespace pfha
