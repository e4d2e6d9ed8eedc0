#include "pfha/rates.hpp"

#include <algorithm>
#include <cmath>

#include "pfha/common.hpp"
#include "pfha/csv.hpp"
#include "pfha/mathutil.hpp"

namespace pfha {

namespace {
void check_inputs(const GammaPrior& prior, const IncidentCount& count) {
  if (prior.alpha <= 0.0 || prior.beta <= 0.0)
    throw DataError("gamma prior parameters must be positive");
  if (count.n_events < 0) throw DataError("negative event count");
  if (count.observation_years <= 0.0)
    throw DataError("observation period must be positive");
}
}  // namespace

double posterior_rate(const GammaPrior& prior, const IncidentCount& count) {
  check_inputs(prior, count);
  return (prior.alpha + count.n_events) / (prior.beta + count.observation_years);
}

std::pair<double, double> credible_interval(const GammaPrior& prior,
                                            const IncidentCount& count, double level) {
  check_inputs(prior, count);
  if (level <= 0.0 || level >= 1.0)
    throw DataError("credible level must be in (0, 1)");
  const double shape = prior.alpha + count.n_events;
  const double rate = prior.beta + count.observation_years;
  const double tail = 0.5 * (1.0 - level);
  return {gamma_quantile(shape, tail) / rate, gamma_quantile(shape, 1.0 - tail) / rate};
}

std::map<PriorClass, GammaPrior> default_priors() {
  // Prior means: midpoints of per-class observed rate ranges.
  const std::map<PriorClass, double> prior_mean = {
      {PriorClass::ccgt, 2.20},          {PriorClass::interconnector, 6.895},
      {PriorClass::nuclear, 0.885},      {PriorClass::biomass, 0.76},
      {PriorClass::pumped_storage, 0.425}, {PriorClass::wind, 0.425},
  };
  std::map<PriorClass, GammaPrior> priors;
  for (const auto& [cls, mean] : prior_mean)
    priors[cls] = GammaPrior{cls, 1.0, 1.0 / mean};
  return priors;
}

std::map<PriorClass, GammaPrior> load_priors(const std::filesystem::path& path) {
  auto priors = default_priors();
  const Table t = read_delimited(path);
  if (t.rows.empty()) return priors;
  const int c_cls = t.column("prior_class");
  const int c_a = t.column("alpha");
  const int c_b = t.column("beta");
  for (const auto& row : t.rows) {
    const PriorClass cls = parse_prior_class(row.at(c_cls));
    priors[cls] = GammaPrior{cls, parse_double(row.at(c_a), "priors alpha"),
                             parse_double(row.at(c_b), "priors beta")};
  }
  return priors;
}

std::vector<Incident> load_incidents(const std::filesystem::path& path) {
  const Table t = read_delimited(path);
  std::vector<Incident> out;
  if (t.rows.empty()) return out;
  const int c_ts = t.column("timestamp_iso8601");
  const int c_src = t.column("source_id");
  const int c_rocof = t.column("rocof_hz_per_s");
  const int c_h = t.column("inertia_gva_s");
  const int c_nadir = t.column("nadir_deviation_hz");
  const int c_mw = t.column("actual_mw", false);
  for (const auto& row : t.rows) {
    Incident inc;
    inc.timestamp_epoch_s = parse_iso8601(row.at(c_ts));
    inc.source_id = row.at(c_src);
    inc.rocof_hz_per_s = parse_double(row.at(c_rocof), "incidents rocof");
    inc.inertia_gva_s = parse_double(row.at(c_h), "incidents inertia");
    inc.nadir_deviation_hz = parse_double(row.at(c_nadir), "incidents nadir");
    if (c_mw >= 0 && static_cast<std::size_t>(c_mw) < row.size() && !row[c_mw].empty())
      inc.actual_mw = parse_double(row[c_mw], "incidents actual_mw");
    out.push_back(std::move(inc));
  }
  return out;
}

std::vector<IncidentCount> count_incidents(const std::vector<Incident>& incidents,
                                           double observation_years,
                                           const std::string& assign_unmatched_to) {
  double years = observation_years;
  if (years <= 0.0 && incidents.size() >= 2) {
    const auto [lo, hi] = std::minmax_element(
        incidents.begin(), incidents.end(), [](const Incident& a, const Incident& b) {
          return a.timestamp_epoch_s < b.timestamp_epoch_s;
        });
    years = years_between(lo->timestamp_epoch_s, hi->timestamp_epoch_s);
  }
  if (years <= 0.0) throw DataError("cannot infer observation period from incidents");

  std::map<std::string, int> counts;
  for (const auto& inc : incidents) {
    std::string id = inc.source_id;
    if (id.empty()) {
      if (assign_unmatched_to.empty()) continue;
      id = assign_unmatched_to;
    }
    counts[id] += 1;
  }
  std::vector<IncidentCount> out;
  out.reserve(counts.size());
  for (const auto& [id, n] : counts) out.push_back({id, n, years});
  return out;
}

void apply_rates(Catalogue& catalogue, const std::map<PriorClass, GammaPrior>& priors,
                 const std::vector<IncidentCount>& counts) {
  double years = 0.0;
  for (const auto& c : counts) years = std::max(years, c.observation_years);
  if (years <= 0.0) years = 1.0;
  for (auto& src : catalogue.sources) {
    if (src.source_type == SourceType::pair || src.source_type == SourceType::cascade)
      continue;  // pair rates come from the pairs file
    const auto pit = priors.find(src.prior_class);
    if (pit == priors.end())
      throw DataError("no prior for class " + to_string(src.prior_class));
    IncidentCount count{src.source_id, 0, years};
    for (const auto& c : counts)
      if (c.source_id == src.source_id) count = c;
    src.trip_rate_per_yr = posterior_rate(pit->second, count);
  }
}

}  // namespace pfha
