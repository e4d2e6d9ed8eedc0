#include "pfha/disagg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "pfha/csv.hpp"
#include "pfha/mathutil.hpp"

namespace pfha {

DisaggDimension parse_disagg_dimension(const std::string& text) {
  if (text == "source") return DisaggDimension::source;
  if (text == "loss_size") return DisaggDimension::loss_size;
  if (text == "state") return DisaggDimension::state;
  if (text == "epsilon") return DisaggDimension::epsilon;
  if (text == "size_inertia_epsilon") return DisaggDimension::size_inertia_epsilon;
  if (text == "size_demand") return DisaggDimension::size_demand;
  throw ConfigError("unknown disaggregation dimension: " + text);
}

std::string to_string(DisaggDimension dim) {
  switch (dim) {
    case DisaggDimension::source: return "source";
    case DisaggDimension::loss_size: return "loss_size";
    case DisaggDimension::state: return "state";
    case DisaggDimension::epsilon: return "epsilon";
    case DisaggDimension::size_inertia_epsilon: return "size_inertia_epsilon";
    case DisaggDimension::size_demand: return "size_demand";
  }
  return "source";
}

int epsilon_band_index(double epsilon, std::span<const double> edges) {
  int band = 0;
  for (double edge : edges) {
    if (epsilon < edge) return band;
    ++band;
  }
  return band;
}

std::string epsilon_band_label(int band, std::span<const double> edges) {
  if (band <= 0) return "<" + format_g9(edges.front());
  if (static_cast<std::size_t>(band) >= edges.size())
    return ">=" + format_g9(edges.back());
  return format_g9(edges[band - 1]) + "-" + format_g9(edges[band]);
}

namespace {

std::string quantised_band_label(double value, double width) {
  const double lo = std::floor(value / width) * width;
  return format_g9(lo) + "-" + format_g9(lo + width);
}

// Sortable composite key: numeric components first, then any string key, so
// grouping and tie-breaking are deterministic.
using GroupKey = std::tuple<double, double, double, std::string>;

struct GroupAgg {
  double contribution = 0.0;
  double epsilon_weighted = 0.0;
  std::vector<DisaggKey> keys;
};

}  // namespace

std::vector<DisaggCell> disaggregate(const HazardResult& result,
                                     const std::vector<StateBin>& state_bins,
                                     double threshold_hz, DisaggDimension dimension,
                                     const DisaggOptions& options) {
  const ThresholdHazard& row = result.at_threshold(threshold_hz);
  if (row.cells.empty() && row.rate_per_yr > 0.0)
    throw ConfigError("disaggregation needs per-cell contributions; "
                      "recompute with cell retention enabled");
  if (row.rate_per_yr <= 0.0) {
    warn("hazard rate is zero at " + format_g9(threshold_hz) +
         " Hz; nothing to disaggregate");
    return {};
  }

  auto bin_of = [&](int index) -> const StateBin& {
    for (const auto& bin : state_bins)
      if (bin.bin_index == index) return bin;
    throw DataError("state bin " + std::to_string(index) +
                    " referenced by hazard cells is missing");
  };

  std::map<GroupKey, GroupAgg> groups;
  for (const auto& cell : row.cells) {
    GroupKey key{0.0, 0.0, 0.0, std::string{}};
    std::vector<DisaggKey> labels;
    switch (dimension) {
      case DisaggDimension::source:
        std::get<3>(key) = cell.source_id;
        labels = {{"source_id", cell.source_id}};
        break;
      case DisaggDimension::loss_size:
        std::get<0>(key) = cell.loss_bin_mw;
        labels = {{"loss_bin_mw", format_g9(cell.loss_bin_mw)}};
        break;
      case DisaggDimension::state:
        std::get<0>(key) = cell.state_bin_index;
        labels = {{"state_bin", std::to_string(cell.state_bin_index)}};
        break;
      case DisaggDimension::epsilon: {
        const int band = epsilon_band_index(cell.epsilon_star, options.epsilon_edges);
        std::get<0>(key) = band;
        labels = {{"epsilon_band", epsilon_band_label(band, options.epsilon_edges)}};
        break;
      }
      case DisaggDimension::size_inertia_epsilon: {
        const StateBin& bin = bin_of(cell.state_bin_index);
        const int band = epsilon_band_index(cell.epsilon_star, options.epsilon_edges);
        std::get<0>(key) = cell.loss_bin_mw;
        std::get<1>(key) =
            std::floor(bin.mean_inertia_gva_s / options.inertia_band_gva_s);
        std::get<2>(key) = band;
        labels = {{"loss_bin_mw", format_g9(cell.loss_bin_mw)},
                  {"inertia_band_gva_s",
                   quantised_band_label(bin.mean_inertia_gva_s, options.inertia_band_gva_s)},
                  {"epsilon_band", epsilon_band_label(band, options.epsilon_edges)}};
        break;
      }
      case DisaggDimension::size_demand: {
        const StateBin& bin = bin_of(cell.state_bin_index);
        std::get<0>(key) = cell.loss_bin_mw;
        std::get<1>(key) = std::floor(bin.mean_demand_gw / options.demand_band_gw);
        labels = {{"loss_bin_mw", format_g9(cell.loss_bin_mw)},
                  {"demand_band_gw",
                   quantised_band_label(bin.mean_demand_gw, options.demand_band_gw)}};
        break;
      }
    }
    GroupAgg& agg = groups[key];
    if (agg.keys.empty()) agg.keys = std::move(labels);
    agg.contribution += cell.contribution_per_yr;
    if (std::isfinite(cell.epsilon_star))
      agg.epsilon_weighted += cell.contribution_per_yr * cell.epsilon_star;
  }

  std::vector<DisaggCell> cells;
  cells.reserve(groups.size());
  for (auto& [key, agg] : groups) {
    DisaggCell out;
    out.keys = std::move(agg.keys);
    out.contribution_per_yr = agg.contribution;
    out.fraction = agg.contribution / row.rate_per_yr;
    out.mean_epsilon = agg.contribution > 0.0 ? agg.epsilon_weighted / agg.contribution : 0.0;
    cells.push_back(std::move(out));
  }
  return cells;
}

}  // namespace pfha
