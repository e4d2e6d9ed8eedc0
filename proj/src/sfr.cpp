#include "pfha/sfr.hpp"

#include <cmath>
#include <string>

#include "pfha/mathutil.hpp"

namespace pfha {

double effective_damping(double demand_gw, double response_mw, const SfrParams& params) {
  if (demand_gw <= 0.0) throw NumericError("effective_damping: demand must be positive");
  const double demand_mw = demand_gw * 1000.0;
  return (params.load_damping_pct_per_hz / 100.0) * demand_mw +
         response_mw / (params.droop * params.f0);
}

double sfr_median_nadir(double loss_mw, double inertia_gva_s, double demand_gw,
                        double response_mw, const SfrParams& params) {
  if (loss_mw <= 0.0 || inertia_gva_s <= 0.0)
    throw NumericError("sfr_median_nadir: loss and inertia must be positive");
  const double d_eff = effective_damping(demand_gw, response_mw, params);
  const double m = 2.0 * inertia_gva_s * 1000.0 / params.f0;  // MW·s/Hz
  const double tau_sys = m / d_eff;
  const double ratio = params.tau_r_s / tau_sys;
  return (loss_mw / d_eff) * std::sqrt(1.0 + ratio * ratio) * params.bias;
}

double aleatory_sigma(double loss_mw, double inertia_gva_s, const SigmaParams& params) {
  const double inertia_term =
      1.0 + params.inertia_coeff *
                std::max(0.0, (params.inertia_ref_gva_s - inertia_gva_s) /
                                  params.inertia_ref_gva_s);
  const double size_term =
      1.0 + params.size_coeff *
                std::max(0.0, (loss_mw - params.size_ref_mw) / params.size_scale_mw);
  return params.sigma0 * inertia_term * size_term;
}

double exceedance_probability(const NadirPrediction& prediction, double threshold_hz) {
  if (threshold_hz <= 0.0)
    throw NumericError("exceedance_probability: threshold must be positive");
  if (prediction.median_nadir_hz <= 0.0 || prediction.sigma <= 0.0)
    throw NumericError("exceedance_probability: invalid prediction");
  const double z =
      (std::log(prediction.median_nadir_hz) - std::log(threshold_hz)) / prediction.sigma;
  return norm_cdf(z);
}

double loss_from_rocof(double rocof_hz_per_s, double inertia_gva_s, double f0) {
  return std::fabs(rocof_hz_per_s) * 2.0 * inertia_gva_s * 1000.0 / f0;
}

double rocof_from_loss(double loss_mw, double inertia_gva_s, double f0) {
  return loss_mw * f0 / (2.0 * inertia_gva_s * 1000.0);
}

ReplaySummary replay_residuals(std::span<const ReplayEvent> events,
                               const SfrParams& params) {
  ReplaySummary summary;
  std::vector<double> log_loss;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const ReplayEvent& ev = events[i];
    double loss_mw = 0.0;
    if (ev.actual_mw && *ev.actual_mw > 0.0) {
      loss_mw = *ev.actual_mw;
    } else if (ev.rocof_hz_per_s != 0.0 && ev.inertia_gva_s > 0.0) {
      loss_mw = loss_from_rocof(ev.rocof_hz_per_s, ev.inertia_gva_s, params.f0);
    }
    if (loss_mw <= 0.0 || ev.observed_nadir_hz <= 0.0 || ev.inertia_gva_s <= 0.0) {
      warn("replay event " + std::to_string(i) + " has no usable loss pathway, skipped");
      ++summary.skipped;
      continue;
    }
    const double mu = sfr_median_nadir(loss_mw, ev.inertia_gva_s, ev.demand_gw,
                                       ev.response_mw, params);
    summary.residuals.push_back(std::log(ev.observed_nadir_hz / mu));
    log_loss.push_back(std::log(loss_mw));
  }
  summary.mean_bias = mean(summary.residuals);
  summary.residual_stdev = stdev(summary.residuals);
  const OlsFit fit = ols_fit(log_loss, summary.residuals);
  summary.slope = fit.slope;
  summary.intercept = fit.intercept;
  return summary;
}

}  // namespace pfha
