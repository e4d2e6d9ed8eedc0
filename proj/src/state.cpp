#include "pfha/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pfha/common.hpp"
#include "pfha/csv.hpp"
#include "pfha/mathutil.hpp"

namespace pfha {

StateNormalisation compute_normalisation(std::span<const StateRecord> records) {
  std::vector<double> h, d, r;
  h.reserve(records.size());
  d.reserve(records.size());
  r.reserve(records.size());
  for (const auto& rec : records) {
    h.push_back(rec.inertia_gva_s);
    d.push_back(rec.demand_gw);
    r.push_back(rec.response_mw);
  }
  StateNormalisation n;
  n.mean_inertia = mean(h);
  n.std_inertia = stdev(h);
  n.mean_demand = mean(d);
  n.std_demand = stdev(d);
  n.mean_response = mean(r);
  n.std_response = stdev(r);
  return n;
}

double composite_metric(const StateRecord& record, const MetricWeights& weights,
                        const StateNormalisation& norm) {
  if (norm.std_inertia <= 0.0 || norm.std_demand <= 0.0 || norm.std_response <= 0.0)
    throw DataError("composite_metric: degenerate state stdev");
  const double zh = (record.inertia_gva_s - norm.mean_inertia) / norm.std_inertia;
  const double zd = (record.demand_gw - norm.mean_demand) / norm.std_demand;
  const double zr = (record.response_mw - norm.mean_response) / norm.std_response;
  return -weights.inertia * zh - weights.demand * zd - weights.response * zr;
}

std::vector<StateBin> quantile_bin(std::span<const StateRecord> records, int n_bins,
                                   const MetricWeights& weights) {
  const std::size_t n = records.size();
  if (n == 0) throw DataError("quantile_bin: no state records");
  if (n_bins < 1 || static_cast<std::size_t>(n_bins) > n)
    throw DataError("quantile_bin: need 1 <= n_bins <= record count, got " +
                    std::to_string(n_bins));

  StateNormalisation norm = compute_normalisation(records);
  // A constant variable scores zero everywhere instead of failing the bin
  // construction.
  if (norm.std_inertia <= 0.0) norm.std_inertia = 1.0;
  if (norm.std_demand <= 0.0) norm.std_demand = 1.0;
  if (norm.std_response <= 0.0) norm.std_response = 1.0;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> score(n);
  for (std::size_t i = 0; i < n; ++i) score[i] = composite_metric(records[i], weights, norm);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (score[a] != score[b]) return score[a] > score[b];  // most severe first
    return records[a].timestamp_epoch_s < records[b].timestamp_epoch_s;
  });

  const std::size_t base = n / static_cast<std::size_t>(n_bins);
  const std::size_t extra = n % static_cast<std::size_t>(n_bins);
  std::vector<StateBin> bins;
  bins.reserve(n_bins);
  std::size_t pos = 0;
  for (int b = 0; b < n_bins; ++b) {
    const std::size_t count = base + (static_cast<std::size_t>(b) < extra ? 1 : 0);
    StateBin bin;
    bin.bin_index = b;
    bin.record_count = count;
    bin.weight = static_cast<double>(count) / static_cast<double>(n);
    KahanSum sh, sd, sr, sdc;
    for (std::size_t i = 0; i < count; ++i) {
      const StateRecord& rec = records[order[pos + i]];
      sh.add(rec.inertia_gva_s);
      sd.add(rec.demand_gw);
      sr.add(rec.response_mw);
      sdc.add(rec.dc_contracted_mw);
    }
    const auto dcount = static_cast<double>(count);
    bin.mean_inertia_gva_s = sh.value() / dcount;
    bin.mean_demand_gw = sd.value() / dcount;
    bin.mean_response_mw = sr.value() / dcount;
    bin.mean_dc_mw = sdc.value() / dcount;
    bins.push_back(bin);
    pos += count;
  }
  return bins;
}

std::vector<StateRecord> load_states(const std::filesystem::path& path) {
  const Table t = read_delimited(path);
  std::vector<StateRecord> out;
  if (t.rows.empty()) return out;
  const int c_ts = t.column("timestamp_iso8601");
  const int c_h = t.column("inertia_gva_s");
  const int c_d = t.column("demand_gw");
  const int c_r = t.column("response_mw");
  const int c_dc = t.column("dc_contracted_mw", false);
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    StateRecord rec;
    rec.timestamp_epoch_s = parse_iso8601(row.at(c_ts));
    rec.inertia_gva_s = parse_double(row.at(c_h), "states inertia_gva_s");
    rec.demand_gw = parse_double(row.at(c_d), "states demand_gw");
    rec.response_mw = parse_double(row.at(c_r), "states response_mw");
    if (c_dc >= 0 && static_cast<std::size_t>(c_dc) < row.size() && !row[c_dc].empty())
      rec.dc_contracted_mw = parse_double(row[c_dc], "states dc_contracted_mw");
    out.push_back(rec);
  }
  return out;
}

}  // namespace pfha
