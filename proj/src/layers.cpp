#include "pfha/layers.hpp"

#include <cmath>

#include "pfha/csv.hpp"
#include "pfha/sfr.hpp"

namespace pfha {

Dependency parse_dependency(const std::string& text) {
  if (text == "independent") return Dependency::independent;
  if (text == "common_cause") return Dependency::common_cause;
  if (text == "proximity") return Dependency::proximity;
  if (text == "operator_coupled") return Dependency::operator_coupled;
  throw DataError("unknown pair dependency type: " + text);
}

Severity parse_severity(const std::string& text) {
  if (text == "moderate") return Severity::moderate;
  if (text == "severe") return Severity::severe;
  if (text == "extreme") return Severity::extreme;
  throw DataError("unknown pair severity class: " + text);
}

std::string to_string(Dependency dep) {
  switch (dep) {
    case Dependency::independent: return "independent";
    case Dependency::common_cause: return "common_cause";
    case Dependency::proximity: return "proximity";
    case Dependency::operator_coupled: return "operator_coupled";
  }
  return "independent";
}

std::string to_string(Severity sev) {
  switch (sev) {
    case Severity::moderate: return "moderate";
    case Severity::severe: return "severe";
    case Severity::extreme: return "extreme";
  }
  return "moderate";
}

double severity_default_rate(Severity sev) {
  switch (sev) {
    case Severity::moderate: return 0.10;
    case Severity::severe: return 0.03;
    case Severity::extreme: return 0.01;
  }
  return 0.10;
}

LossPMF convolve_pmfs(const LossPMF& a, const LossPMF& b) {
  const double wa = a.bin_width_mw, wb = b.bin_width_mw;
  if (std::abs(wa - wb) > 1e-9 * std::max({wa, wb, 1.0}))
    throw DataError("cannot convolve loss PMFs with different bin widths (" +
                    format_g9(wa) + " vs " + format_g9(wb) + ")");
  LossPMF out;
  out.bin_width_mw = wa;
  out.first_value_mw = a.first_value_mw + b.first_value_mw;
  out.weights.assign(a.weights.size() + b.weights.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.weights.size(); ++i) {
    if (a.weights[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.weights.size(); ++j)
      out.weights[i + j] += a.weights[i] * b.weights[j];
  }
  return out;
}

SourceRecord build_pair_source(const PairSpec& spec, const Catalogue& catalogue) {
  const SourceRecord* a = catalogue.find(spec.source_id_a);
  const SourceRecord* b = catalogue.find(spec.source_id_b);
  if (a == nullptr)
    throw DataError("pair " + spec.pair_id + " references unknown source: " + spec.source_id_a);
  if (b == nullptr)
    throw DataError("pair " + spec.pair_id + " references unknown source: " + spec.source_id_b);
  if (a->pmf.weights.empty() || b->pmf.weights.empty())
    throw DataError("pair " + spec.pair_id + " constituents need loss PMFs before pairing");

  double rate = spec.rate_per_yr;
  if (rate <= 0.0) {
    rate = severity_default_rate(spec.severity);
  } else {
    const bool outside =
        spec.severity == Severity::moderate
            ? (rate < 0.10 || rate > 0.25)
            : (rate < severity_default_rate(spec.severity) / 3.0 ||
               rate > severity_default_rate(spec.severity) * 3.0);
    if (outside)
      warn("pair " + spec.pair_id + " rate " + format_g9(rate) +
           "/yr sits outside the " + to_string(spec.severity) + " class band");
  }

  SourceRecord pair;
  pair.source_id = spec.pair_id;
  pair.source_type = SourceType::pair;
  pair.capacity_mw = a->capacity_mw + b->capacity_mw;
  pair.max_credible_loss_mw = a->max_credible_loss_mw + b->max_credible_loss_mw;
  pair.prior_class = a->prior_class;  // unused: pair rates are assessed, not estimated
  pair.trip_rate_per_yr = rate;
  pair.pmf = convolve_pmfs(a->pmf, b->pmf);
  return pair;
}

std::vector<PairSpec> load_pairs(const std::filesystem::path& path) {
  Table table = read_delimited(path);
  if (table.rows.empty()) return {};
  const int id = table.column("pair_id");
  const int src_a = table.column("source_a");
  const int src_b = table.column("source_b");
  const int dep = table.column("dependency");
  const int sev = table.column("severity");
  const int rate = table.column("rate_per_yr", false);

  std::vector<PairSpec> specs;
  specs.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    PairSpec spec;
    spec.pair_id = row.at(id);
    spec.source_id_a = row.at(src_a);
    spec.source_id_b = row.at(src_b);
    spec.dependency = parse_dependency(row.at(dep));
    spec.severity = parse_severity(row.at(sev));
    if (rate >= 0 && static_cast<std::size_t>(rate) < row.size() && !row[rate].empty()) {
      spec.rate_per_yr = parse_double(row[rate], "pair rate");
      if (spec.rate_per_yr <= 0.0)
        throw DataError("pair " + spec.pair_id + " has non-positive rate");
    }
    for (const auto& other : specs)
      if (other.pair_id == spec.pair_id)
        throw DataError("duplicate pair_id: " + spec.pair_id);
    specs.push_back(std::move(spec));
  }
  return specs;
}

void CascadeSpec::validate() const {
  if (!(rocof_threshold_hz_per_s > 0.0))
    throw ConfigError("cascade RoCoF threshold must be positive");
  if (p_cond < 0.0 || p_cond > 1.0)
    throw ConfigError("cascade conditional probability must lie in [0, 1]");
  if (der_loss_mw < 0.0) throw ConfigError("cascade additional loss must be non-negative");
}

std::vector<CascadeTerm> cascade_adjusted_terms(double loss_mw, double inertia_gva_s,
                                                const CascadeSpec& spec, double f0) {
  spec.validate();
  const double rocof = rocof_from_loss(loss_mw, inertia_gva_s, f0);
  if (rocof < spec.rocof_threshold_hz_per_s || spec.p_cond == 0.0)
    return {{loss_mw, 1.0}};
  return {{loss_mw, 1.0 - spec.p_cond}, {loss_mw + spec.der_loss_mw, spec.p_cond}};
}

}  // namespace pfha
