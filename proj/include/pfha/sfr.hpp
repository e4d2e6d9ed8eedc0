#ifndef PFHA_SFR_HPP
#define PFHA_SFR_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pfha/common.hpp"

namespace pfha {

struct SfrParams {
  double f0 = kNominalFrequencyHz;
  double load_damping_pct_per_hz = 1.0;
  double droop = 0.04;
  double tau_r_s = 1.0;
  double bias = 0.37;  // multiplier on the median nadir, in (0, 1]
};

// Aleatory sigma scaling. The analytical model carries the stronger inertia
// term and a size term; the physics-based model uses the milder inertia
// coefficient and no size scaling.
struct SigmaParams {
  double sigma0 = 0.296;
  double inertia_coeff = 0.2;
  double inertia_ref_gva_s = 150.0;
  double size_coeff = 0.1;
  double size_ref_mw = 500.0;
  double size_scale_mw = 1000.0;

  static SigmaParams analytical(double sigma0 = 0.296) {
    SigmaParams p;
    p.sigma0 = sigma0;
    return p;
  }
  static SigmaParams physics(double sigma0 = 0.296) {
    SigmaParams p;
    p.sigma0 = sigma0;
    p.inertia_coeff = 0.1;
    p.size_coeff = 0.0;
    return p;
  }
};

struct NadirPrediction {
  double median_nadir_hz = 0.0;
  double sigma = 0.0;
};

// Load damping plus governor droop gain, MW/Hz.
double effective_damping(double demand_gw, double response_mw, const SfrParams& params);

// Closed-form median nadir for an instantaneous loss.
double sfr_median_nadir(double loss_mw, double inertia_gva_s, double demand_gw,
                        double response_mw, const SfrParams& params);

double aleatory_sigma(double loss_mw, double inertia_gva_s, const SigmaParams& params);

// P(nadir deviation > threshold) under the log-normal scatter model.
double exceedance_probability(const NadirPrediction& prediction, double threshold_hz);

// Swing-equation inversion: loss magnitude implied by an initial RoCoF.
double loss_from_rocof(double rocof_hz_per_s, double inertia_gva_s,
                       double f0 = kNominalFrequencyHz);

double rocof_from_loss(double loss_mw, double inertia_gva_s,
                       double f0 = kNominalFrequencyHz);

struct ReplayEvent {
  double rocof_hz_per_s = 0.0;
  double inertia_gva_s = 0.0;
  double observed_nadir_hz = 0.0;
  std::optional<double> actual_mw;  // preferred loss pathway when present
  double demand_gw = 28.0;
  double response_mw = 1500.0;
};

struct ReplaySummary {
  std::vector<double> residuals;  // ln(observed / predicted median)
  double mean_bias = 0.0;
  double residual_stdev = 0.0;
  double slope = 0.0;      // residual regressed on ln(loss)
  double intercept = 0.0;
  std::size_t skipped = 0;
};

// Event replay: derive the loss per event, predict the median nadir, record
// log-residuals, and fit the magnitude-bias trend. Events with no usable
// loss pathway are skipped with a warning.
ReplaySummary replay_residuals(std::span<const ReplayEvent> events,
                               const SfrParams& params);

}  // namespace pfha

#endif
