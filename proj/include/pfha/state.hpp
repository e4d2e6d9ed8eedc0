#ifndef PFHA_STATE_HPP
#define PFHA_STATE_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace pfha {

struct StateRecord {
  std::int64_t timestamp_epoch_s = 0;
  double inertia_gva_s = 0.0;
  double demand_gw = 0.0;
  double response_mw = 0.0;
  double dc_contracted_mw = 0.0;
};

struct MetricWeights {
  double inertia = 0.6;
  double demand = 0.2;
  double response = 0.2;
};

struct StateNormalisation {
  double mean_inertia = 0.0, std_inertia = 0.0;
  double mean_demand = 0.0, std_demand = 0.0;
  double mean_response = 0.0, std_response = 0.0;
};

StateNormalisation compute_normalisation(std::span<const StateRecord> records);

// Severity score: higher means a more stressed system (low inertia, low
// demand, low response). Throws on degenerate stdevs.
double composite_metric(const StateRecord& record, const MetricWeights& weights,
                        const StateNormalisation& norm);

struct StateBin {
  int bin_index = 0;
  double weight = 0.0;
  double mean_inertia_gva_s = 0.0;
  double mean_demand_gw = 0.0;
  double mean_response_mw = 0.0;
  double mean_dc_mw = 0.0;
  std::size_t record_count = 0;
};

// Equal-count severity bins, most severe first. Bin counts differ from
// floor(N / n_bins) by at most one; ties in the score break by timestamp.
std::vector<StateBin> quantile_bin(std::span<const StateRecord> records, int n_bins,
                                   const MetricWeights& weights);

// States file columns:
//   timestamp_iso8601,inertia_gva_s,demand_gw,response_mw,dc_contracted_mw
// A missing or empty DC field defaults to zero.
std::vector<StateRecord> load_states(const std::filesystem::path& path);

}  // namespace pfha

#endif
