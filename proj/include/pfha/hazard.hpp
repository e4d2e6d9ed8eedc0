#ifndef PFHA_HAZARD_HPP
#define PFHA_HAZARD_HPP

#include <string>
#include <vector>

#include "pfha/catalogue.hpp"
#include "pfha/controls.hpp"
#include "pfha/layers.hpp"
#include "pfha/physics.hpp"
#include "pfha/sfr.hpp"
#include "pfha/state.hpp"

namespace pfha {

struct HazardInputs {
  const Catalogue* catalogue = nullptr;
  const std::vector<StateBin>* state_bins = nullptr;
  FrpeKind frpe = FrpeKind::sfr;
  SfrParams sfr;       // analytical engine; droop/damping also feed the LFDD cap
  SigmaParams sigma;   // must match the engine choice
  const NadirGrid* grid = nullptr;  // required for the physics engine
  DcConfig dc;
  // When true the contracted DC volume comes from each state bin's mean
  // scheduled volume instead of the flat config value.
  bool use_state_dc = false;
  LfddConfig lfdd = LfddConfig::defaults();
  ControlsMode controls = ControlsMode::both;
  const CascadeSpec* cascade = nullptr;  // nullptr = cascade expansion off
  double pair_rate_multiplier = 1.0;     // compound-occurrence scaling, pairs only
  std::vector<double> thresholds_hz;
  bool keep_cells = false;

  void validate() const;
};

struct HazardCell {
  std::string source_id;
  double loss_bin_mw = 0.0;  // effective loss (includes any cascade increment)
  int state_bin_index = 0;
  double contribution_per_yr = 0.0;
  double epsilon_star = 0.0;  // (ln delta - ln mu) / sigma at this threshold
};

struct ThresholdHazard {
  double threshold_hz = 0.0;
  double rate_per_yr = 0.0;
  double return_period_yr = 0.0;
  std::vector<HazardCell> cells;  // populated only when keep_cells is set
};

struct HazardResult {
  std::vector<ThresholdHazard> thresholds;

  const ThresholdHazard& at_threshold(double threshold_hz) const;
};

// Discretised hazard sum over sources x loss bins x state bins, with the
// median nadir from the selected engine (DC routed, LFDD capped), lognormal
// scatter, optional per-cell cascade branching, and compensated accumulation.
HazardResult compute_hazard(const HazardInputs& inputs);

std::vector<double> default_threshold_grid(double lo_hz = 0.05, double hi_hz = 2.2,
                                           double step_hz = 0.05);

// compute_hazard over an evenly spaced threshold grid.
HazardResult hazard_curve(HazardInputs inputs, double lo_hz = 0.05, double hi_hz = 2.2,
                          double step_hz = 0.05);

struct DecompositionRow {
  ControlsMode mode = ControlsMode::none;
  std::vector<double> rates_per_yr;  // aligned with the input thresholds
};

// The four-configuration defence-value decomposition: none / dc / lfdd / both.
std::vector<DecompositionRow> run_configuration(HazardInputs inputs);

}  // namespace pfha

#endif
