#include "pfha/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pfha/csv.hpp"
#include "pfha/layers.hpp"
#include "pfha/mathutil.hpp"

namespace pfha {

SplitResult temporal_split(const HazardInputs& central, std::span<const Incident> incidents,
                           const std::map<PriorClass, GammaPrior>& priors,
                           const std::string& catch_all, std::int64_t split_epoch_s) {
  if (incidents.empty()) throw DataError("temporal split needs at least one incident");
  std::vector<Incident> sorted(incidents.begin(), incidents.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Incident& a, const Incident& b) {
    return a.timestamp_epoch_s < b.timestamp_epoch_s;
  });
  const std::int64_t first = sorted.front().timestamp_epoch_s;
  const std::int64_t last = sorted.back().timestamp_epoch_s;

  SplitResult out;
  for (const auto& inc : sorted)
    (inc.timestamp_epoch_s < split_epoch_s ? out.training : out.test).push_back(inc);
  if (out.training.empty())
    throw DataError("temporal split at " + format_iso8601(split_epoch_s) +
                    " leaves an empty training set");

  out.training_years = years_between(first, std::min(split_epoch_s, last));
  out.full_years = years_between(first, last);

  const auto counts_training =
      count_incidents(out.training, out.training_years, catch_all);
  const auto counts_full = count_incidents(sorted, out.full_years, catch_all);

  Catalogue training_cat = *central.catalogue;
  Catalogue full_cat = *central.catalogue;
  apply_rates(training_cat, priors, counts_training);
  apply_rates(full_cat, priors, counts_full);

  HazardInputs in = central;
  in.keep_cells = false;
  in.catalogue = &training_cat;
  const HazardResult training_result = compute_hazard(in);
  in.catalogue = &full_cat;
  const HazardResult full_result = compute_hazard(in);

  out.thresholds_hz = central.thresholds_hz;
  for (std::size_t t = 0; t < central.thresholds_hz.size(); ++t) {
    const double training_rate = training_result.thresholds[t].rate_per_yr;
    const double full_rate = full_result.thresholds[t].rate_per_yr;
    out.training_rates.push_back(training_rate);
    out.full_rates.push_back(full_rate);
    const double ratio = full_rate > 0.0
                             ? training_rate / full_rate
                             : std::numeric_limits<double>::quiet_NaN();
    out.ratios.push_back(ratio);
    out.stable.push_back(std::isfinite(ratio) && ratio >= 0.5 && ratio <= 2.0);
  }
  return out;
}

namespace {

FrpeMetrics summarise(const std::vector<double>& residuals,
                      const std::vector<double>& abs_errors, std::size_t skipped) {
  FrpeMetrics m;
  m.events_used = residuals.size();
  m.skipped = skipped;
  if (!residuals.empty()) {
    m.mean_log_residual = mean(residuals);
    m.bias_factor = std::exp(m.mean_log_residual);
    m.residual_stdev = stdev(residuals);
    m.mae_hz = mean(abs_errors);
  }
  return m;
}

}  // namespace

FrpeComparison frpe_compare(std::span<const ReplayEvent> events, const SfrParams& params,
                            const NadirGrid& grid) {
  SfrParams raw = params;
  raw.bias = 1.0;

  std::vector<double> res_sfr, err_sfr, res_phys, err_phys;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const ReplayEvent& ev = events[i];
    double loss_mw = 0.0;
    if (ev.actual_mw && *ev.actual_mw > 0.0) {
      loss_mw = *ev.actual_mw;
    } else if (ev.rocof_hz_per_s != 0.0 && ev.inertia_gva_s > 0.0) {
      loss_mw = loss_from_rocof(ev.rocof_hz_per_s, ev.inertia_gva_s, params.f0);
    }
    if (loss_mw <= 0.0 || ev.observed_nadir_hz <= 0.0 || ev.inertia_gva_s <= 0.0) {
      warn("comparison event " + std::to_string(i) + " has no usable loss pathway, skipped");
      ++skipped;
      continue;
    }
    const double mu_sfr =
        sfr_median_nadir(loss_mw, ev.inertia_gva_s, ev.demand_gw, ev.response_mw, raw);
    const double mu_phys =
        grid.interpolate(loss_mw, ev.inertia_gva_s, ev.demand_gw, ev.response_mw, 0.0);
    if (mu_phys <= 0.0) {
      warn("comparison event " + std::to_string(i) + " has a degenerate prediction, skipped");
      ++skipped;
      continue;
    }
    res_sfr.push_back(std::log(ev.observed_nadir_hz / mu_sfr));
    err_sfr.push_back(std::abs(ev.observed_nadir_hz - mu_sfr));
    res_phys.push_back(std::log(ev.observed_nadir_hz / mu_phys));
    err_phys.push_back(std::abs(ev.observed_nadir_hz - mu_phys));
  }

  FrpeComparison result;
  result.sfr_raw = summarise(res_sfr, err_sfr, skipped);
  result.physics = summarise(res_phys, err_phys, skipped);
  return result;
}

std::vector<AnchorCheck> anchor_report() {
  std::vector<AnchorCheck> checks;
  auto add = [&](std::string name, double value, double lo, double hi) {
    checks.push_back({std::move(name), value, lo, hi, value >= lo && value <= hi});
  };

  // Worked probability chain at a fixed (mu, sigma) pair.
  const double mu_fixed = 0.164, sigma_fixed = 0.317;
  const double z_08 = (std::log(mu_fixed) - std::log(0.8)) / sigma_fixed;
  add("z-score at 0.8 Hz (mu=0.164, sigma=0.317)", z_08, -5.00, -4.98);
  add("exceedance probability at 0.8 Hz", norm_cdf(z_08), 2e-7, 4e-7);
  const double z_05 = (std::log(mu_fixed) - std::log(0.5)) / sigma_fixed;
  add("z-score at 0.5 Hz (mu=0.164, sigma=0.317)", z_05, -3.53, -3.51);
  add("exceedance probability at 0.5 Hz", norm_cdf(z_05), 2.0e-4, 2.4e-4);

  SfrParams sfr;  // defaults carry bias 0.37
  add("median nadir, 1000 MW at (H=180, D=28, R=1500)",
      sfr_median_nadir(1000.0, 180.0, 28.0, 1500.0, sfr), 0.355, 0.370);
  add("median nadir, 2000 MW at (H=180, D=28, R=1500)",
      sfr_median_nadir(2000.0, 180.0, 28.0, 1500.0, sfr), 0.715, 0.735);

  add("aleatory sigma at (H=180, loss=1198 MW)",
      aleatory_sigma(1198.0, 180.0, SigmaParams::analytical()), 0.3162, 0.3172);

  add("loss implied by 0.125 Hz/s at H=150", loss_from_rocof(0.125, 150.0), 749.9, 750.1);
  const CascadeSpec cascade;
  add("cascade branch count at 749.9 MW, H=150",
      static_cast<double>(cascade_adjusted_terms(749.9, 150.0, cascade).size()), 1.0, 1.0);
  add("cascade branch count at 750.0 MW, H=150",
      static_cast<double>(cascade_adjusted_terms(750.0, 150.0, cascade).size()), 2.0, 2.0);

  // 2019-08-09 replay: recorded loss 1341 MW at H=210 GVA·s; demand 28 GW and
  // response 1000 MW are assumed conditions chosen to reproduce the published
  // median-nadir estimate, shipped as a fixture rather than recorded fact.
  add("2019-08-09 replay (assumed D=28 GW, R=1000 MW)",
      sfr_median_nadir(1341.0, 210.0, 28.0, 1000.0, sfr), 0.63, 0.65);
  return checks;
}

}  // namespace pfha
