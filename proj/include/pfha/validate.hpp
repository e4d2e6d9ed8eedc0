#ifndef PFHA_VALIDATE_HPP
#define PFHA_VALIDATE_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pfha/hazard.hpp"
#include "pfha/rates.hpp"
#include "pfha/sfr.hpp"

namespace pfha {

struct SplitResult {
  std::vector<Incident> training;
  std::vector<Incident> test;
  double training_years = 0.0;
  double full_years = 0.0;
  std::vector<double> thresholds_hz;
  std::vector<double> training_rates;  // central-path hazard, training calibration
  std::vector<double> full_rates;
  std::vector<double> ratios;          // training / full
  std::vector<bool> stable;            // ratio within [0.5, 2.0]
};

// Temporal out-of-sample check: recalibrate source rates on the pre-split
// window only and compare the central hazard against the full calibration.
// catch_all names the source that absorbs unmatched incidents (may be empty).
SplitResult temporal_split(const HazardInputs& central, std::span<const Incident> incidents,
                           const std::map<PriorClass, GammaPrior>& priors,
                           const std::string& catch_all, std::int64_t split_epoch_s);

struct FrpeMetrics {
  double mean_log_residual = 0.0;
  double bias_factor = 1.0;  // exp(mean log-residual)
  double residual_stdev = 0.0;
  double mae_hz = 0.0;
  std::size_t events_used = 0;
  std::size_t skipped = 0;
};

struct FrpeComparison {
  FrpeMetrics sfr_raw;  // analytical model with the bias multiplier removed
  FrpeMetrics physics;
};

// Side-by-side replay of recorded events through both prediction engines.
FrpeComparison frpe_compare(std::span<const ReplayEvent> events, const SfrParams& params,
                            const NadirGrid& grid);

struct AnchorCheck {
  std::string name;
  double value = 0.0;
  double expected_lo = 0.0;
  double expected_hi = 0.0;
  bool pass = false;
};

// Desk-checkable reference values: the worked probability chain, closed-form
// nadir and sigma spot values, the RoCoF gate, and the 2019-08-09 event
// replay under documented assumed conditions.
std::vector<AnchorCheck> anchor_report();

}  // namespace pfha

#endif
