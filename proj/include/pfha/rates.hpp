#ifndef PFHA_RATES_HPP
#define PFHA_RATES_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pfha/catalogue.hpp"

namespace pfha {

struct GammaPrior {
  PriorClass prior_class = PriorClass::ccgt;
  double alpha = 1.0;  // shape
  double beta = 1.0;   // years
};

struct IncidentCount {
  std::string source_id;
  int n_events = 0;
  double observation_years = 0.0;
};

// Gamma-Poisson posterior mean (alpha + n) / (beta + T); strictly positive,
// so zero-trip sources keep a non-zero rate.
double posterior_rate(const GammaPrior& prior, const IncidentCount& count);

// Equal-tailed interval of the Gamma(alpha + n, beta + T) posterior.
std::pair<double, double> credible_interval(const GammaPrior& prior,
                                            const IncidentCount& count, double level);

// Prior defaults: alpha = 1 with beta such that the prior mean sits at the
// midpoint of each technology class's observed rate range.
std::map<PriorClass, GammaPrior> default_priors();

// Priors file columns: prior_class,alpha,beta. Overrides defaults per class.
std::map<PriorClass, GammaPrior> load_priors(const std::filesystem::path& path);

struct Incident {
  std::int64_t timestamp_epoch_s = 0;
  std::string source_id;  // empty when the event was never matched to a source
  double rocof_hz_per_s = 0.0;
  double inertia_gva_s = 0.0;
  double nadir_deviation_hz = 0.0;
  std::optional<double> actual_mw;
};

// Incidents file columns:
//   timestamp_iso8601,source_id,rocof_hz_per_s,inertia_gva_s,nadir_deviation_hz
// plus an optional actual_mw column used by the replay pipeline.
std::vector<Incident> load_incidents(const std::filesystem::path& path);

// Count incidents per source over the observation window. Unmatched events
// increment the named catch-all source when one is given. observation_years
// of zero or less infers the window from the data span.
std::vector<IncidentCount> count_incidents(const std::vector<Incident>& incidents,
                                           double observation_years,
                                           const std::string& assign_unmatched_to);

// Fill trip_rate_per_yr for every source from its class prior and count.
void apply_rates(Catalogue& catalogue, const std::map<PriorClass, GammaPrior>& priors,
                 const std::vector<IncidentCount>& counts);

}  // namespace pfha

#endif
