#include "pfha/controls.hpp"

#include <algorithm>
#include <cmath>

namespace pfha {

void DcConfig::validate() const {
  if (contracted_mw < 0.0) throw ConfigError("DC contracted volume must be non-negative");
  if (effectiveness < 0.0 || effectiveness > 1.0)
    throw ConfigError("DC effectiveness must lie in [0, 1]");
}

LfddConfig LfddConfig::defaults() {
  LfddConfig config;
  config.stages = {{1.2, 0.10}, {1.4, 0.10}, {1.6, 0.10}, {1.8, 0.15}, {2.0, 0.15}};
  return config;
}

void LfddConfig::validate() const {
  if (relay_effectiveness < 0.0 || relay_effectiveness > 1.0)
    throw ConfigError("LFDD relay effectiveness must lie in [0, 1]");
  if (stage_credit < 0.0 || stage_credit > 1.0)
    throw ConfigError("LFDD stage credit must lie in [0, 1]");
  double cumulative = 0.0;
  double prev = 0.0;
  for (const auto& stage : stages) {
    if (!(stage.activation_deviation_hz > prev))
      throw ConfigError("LFDD stages must activate at strictly deepening deviations");
    if (!(stage.shed_fraction > 0.0) || !(stage.shed_fraction < 1.0))
      throw ConfigError("LFDD shed fractions must lie in (0, 1)");
    prev = stage.activation_deviation_hz;
    cumulative += stage.shed_fraction;
  }
  if (cumulative > 0.6 + 1e-12)
    throw ConfigError("LFDD cumulative shed fraction must not exceed 0.6");
}

DcRouting route_dc(FrpeKind kind, const DcConfig& dc, double base_response_mw) {
  dc.validate();
  const double effective = dc.effective_mw();
  if (kind == FrpeKind::physics) return {effective, base_response_mw};
  return {0.0, base_response_mw + effective};
}

double lfdd_exceedance_factor(double threshold_deviation_hz, const LfddConfig& config) {
  if (!config.enabled) return 1.0;
  config.validate();
  double factor = 1.0;
  for (const auto& stage : config.stages) {
    if (stage.activation_deviation_hz < threshold_deviation_hz)
      factor *= 1.0 - config.relay_effectiveness * config.stage_credit;
  }
  return factor;
}

double lfdd_nadir_cap(double median_nadir_hz, double loss_mw, double demand_gw,
                      double d_eff_mw_per_hz, const LfddConfig& config) {
  if (!config.enabled) return median_nadir_hz;
  config.validate();
  if (!(d_eff_mw_per_hz > 0.0)) throw ConfigError("effective damping must be positive");
  const double demand_mw = demand_gw * 1000.0;
  double shed_before_mw = 0.0;
  for (const auto& stage : config.stages) {
    const double shed_after_mw =
        shed_before_mw + config.relay_effectiveness * stage.shed_fraction * demand_mw;
    if (shed_after_mw >= loss_mw) {
      const double residual_mw = loss_mw - shed_before_mw;
      const double cap = stage.activation_deviation_hz + residual_mw / d_eff_mw_per_hz;
      return std::min(median_nadir_hz, cap);
    }
    shed_before_mw = shed_after_mw;
  }
  return median_nadir_hz;  // shedding never overtakes the imbalance
}

ControlsMode parse_controls_mode(const std::string& text) {
  if (text == "none") return ControlsMode::none;
  if (text == "dc") return ControlsMode::dc_only;
  if (text == "lfdd") return ControlsMode::lfdd_only;
  if (text == "both") return ControlsMode::both;
  throw ConfigError("unknown controls mode: " + text);
}

std::string to_string(ControlsMode mode) {
  switch (mode) {
    case ControlsMode::none: return "none";
    case ControlsMode::dc_only: return "dc";
    case ControlsMode::lfdd_only: return "lfdd";
    case ControlsMode::both: return "both";
  }
  return "none";
}

bool dc_enabled(ControlsMode mode) {
  return mode == ControlsMode::dc_only || mode == ControlsMode::both;
}

bool lfdd_enabled(ControlsMode mode) {
  return mode == ControlsMode::lfdd_only || mode == ControlsMode::both;
}

}  // namespace pfha
