#ifndef PFHA_CONTROLS_HPP
#define PFHA_CONTROLS_HPP

#include <string>
#include <vector>

#include "pfha/common.hpp"

namespace pfha {

struct DcConfig {
  double contracted_mw = 1000.0;
  double effectiveness = 0.85;

  void validate() const;
  double effective_mw() const { return contracted_mw * effectiveness; }
};

struct LfddStage {
  double activation_deviation_hz = 0.0;  // below nominal; 1.2 Hz = 48.8 Hz
  double shed_fraction = 0.0;            // of total demand
};

struct LfddConfig {
  std::vector<LfddStage> stages;
  double relay_effectiveness = 0.85;
  double stage_credit = 0.5;  // fraction of breaches a qualifying stage averts
  bool enabled = true;

  static LfddConfig defaults();
  void validate() const;
};

struct DcRouting {
  double grid_coordinate_mw = 0.0;      // physics pathway: HVDC axis of the grid
  double augmented_response_mw = 0.0;   // analytical pathway: folded into droop response
};

// Exactly one pathway carries the DC volume, so it is never double counted
// between the two response engines.
DcRouting route_dc(FrpeKind kind, const DcConfig& dc, double base_response_mw);

// Survival product over stages strictly shallower than the threshold; a stage
// cannot avert a breach of its own activation level.
double lfdd_exceedance_factor(double threshold_deviation_hz, const LfddConfig& config);

// Caps the predicted median nadir where cumulative shed demand overtakes the
// imbalance; the residual settles through the effective damping.
double lfdd_nadir_cap(double median_nadir_hz, double loss_mw, double demand_gw,
                      double d_eff_mw_per_hz, const LfddConfig& config);

enum class ControlsMode { none, dc_only, lfdd_only, both };

ControlsMode parse_controls_mode(const std::string& text);
std::string to_string(ControlsMode mode);
bool dc_enabled(ControlsMode mode);
bool lfdd_enabled(ControlsMode mode);

}  // namespace pfha

#endif
