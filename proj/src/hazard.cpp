#include "pfha/hazard.hpp"

#include <cmath>
#include <limits>

#include "pfha/csv.hpp"
#include "pfha/mathutil.hpp"

namespace pfha {

void HazardInputs::validate() const {
  if (catalogue == nullptr) throw ConfigError("hazard inputs need a catalogue");
  if (state_bins == nullptr || state_bins->empty())
    throw ConfigError("hazard inputs need at least one state bin");
  if (frpe == FrpeKind::physics && grid == nullptr)
    throw ConfigError("physics engine selected but no nadir grid supplied");
  if (thresholds_hz.empty()) throw ConfigError("hazard inputs need thresholds");
  double prev = 0.0;
  for (double t : thresholds_hz) {
    if (!(t > prev)) throw ConfigError("thresholds must be positive and ascending");
    prev = t;
  }
  double weight_sum = 0.0;
  for (const auto& bin : *state_bins) weight_sum += bin.weight;
  if (std::abs(weight_sum - 1.0) > 1e-9)
    throw DataError("state-bin weights sum to " + format_g9(weight_sum) + ", expected 1");
  if (!(pair_rate_multiplier > 0.0))
    throw ConfigError("pair rate multiplier must be positive");
  dc.validate();
  lfdd.validate();
  if (cascade != nullptr) cascade->validate();
  for (const auto& source : catalogue->sources) {
    if (source.pmf.weights.empty())
      throw DataError("source " + source.source_id + " has no loss PMF");
    if (source.trip_rate_per_yr < 0.0)
      throw DataError("source " + source.source_id + " has a negative trip rate");
  }
}

namespace {

// One (source, loss bin, state bin, cascade branch) integrand cell; the
// median/sigma pair is threshold-independent so it is assembled once.
struct CellModel {
  std::size_t source_index = 0;
  double loss_mw = 0.0;
  int state_bin = 0;
  double weight_per_yr = 0.0;
  double mu_hz = 0.0;
  double sigma = 0.0;
};

std::vector<CellModel> assemble_cells(const HazardInputs& in) {
  std::vector<CellModel> cells;
  const bool with_dc = dc_enabled(in.controls);
  const bool with_lfdd = lfdd_enabled(in.controls);

  for (std::size_t i = 0; i < in.catalogue->sources.size(); ++i) {
    const SourceRecord& source = in.catalogue->sources[i];
    double nu = source.trip_rate_per_yr;
    if (source.source_type == SourceType::pair) nu *= in.pair_rate_multiplier;
    if (nu == 0.0) continue;

    for (std::size_t j = 0; j < source.pmf.size(); ++j) {
      const double wj = source.pmf.weights[j];
      if (wj == 0.0) continue;
      const double loss = source.pmf.value_at(j);

      for (const auto& bin : *in.state_bins) {
        double volume = 0.0;
        if (with_dc)
          volume = in.use_state_dc ? bin.mean_dc_mw : in.dc.contracted_mw;
        DcConfig cell_dc = in.dc;
        cell_dc.contracted_mw = volume;
        const DcRouting routing = route_dc(in.frpe, cell_dc, bin.mean_response_mw);

        std::vector<CascadeTerm> terms{{loss, 1.0}};
        if (in.cascade != nullptr)
          terms = cascade_adjusted_terms(loss, bin.mean_inertia_gva_s, *in.cascade,
                                         in.sfr.f0);

        for (const auto& term : terms) {
          CellModel cell;
          cell.source_index = i;
          cell.loss_mw = term.effective_loss_mw;
          cell.state_bin = bin.bin_index;
          cell.weight_per_yr = nu * wj * bin.weight * term.probability_weight;
          try {
            cell.mu_hz =
                in.frpe == FrpeKind::sfr
                    ? sfr_median_nadir(term.effective_loss_mw, bin.mean_inertia_gva_s,
                                       bin.mean_demand_gw, routing.augmented_response_mw,
                                       in.sfr)
                    : in.grid->interpolate(term.effective_loss_mw, bin.mean_inertia_gva_s,
                                           bin.mean_demand_gw, routing.augmented_response_mw,
                                           routing.grid_coordinate_mw);
            if (with_lfdd) {
              const double d_eff = effective_damping(
                  bin.mean_demand_gw,
                  routing.augmented_response_mw + routing.grid_coordinate_mw, in.sfr);
              cell.mu_hz = lfdd_nadir_cap(cell.mu_hz, term.effective_loss_mw,
                                          bin.mean_demand_gw, d_eff, in.lfdd);
            }
            cell.sigma =
                aleatory_sigma(term.effective_loss_mw, bin.mean_inertia_gva_s, in.sigma);
          } catch (const NumericError& e) {
            throw NumericError("response prediction failed at source=" + source.source_id +
                               " loss=" + format_g9(term.effective_loss_mw) +
                               " MW state_bin=" + std::to_string(bin.bin_index) + ": " +
                               e.what());
          }
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

}  // namespace

const ThresholdHazard& HazardResult::at_threshold(double threshold_hz) const {
  for (const auto& row : thresholds)
    if (std::abs(row.threshold_hz - threshold_hz) <= 1e-9) return row;
  throw ConfigError("threshold " + format_g9(threshold_hz) + " Hz not present in result");
}

HazardResult compute_hazard(const HazardInputs& inputs) {
  inputs.validate();
  if (inputs.catalogue->sources.empty()) warn("hazard computed over an empty catalogue");

  const std::vector<CellModel> cells = assemble_cells(inputs);
  const bool with_lfdd = lfdd_enabled(inputs.controls);

  HazardResult result;
  result.thresholds.reserve(inputs.thresholds_hz.size());
  for (double delta : inputs.thresholds_hz) {
    ThresholdHazard row;
    row.threshold_hz = delta;
    const double factor = with_lfdd ? lfdd_exceedance_factor(delta, inputs.lfdd) : 1.0;
    const double log_delta = std::log(delta);

    KahanSum total;
    if (inputs.keep_cells) row.cells.reserve(cells.size());
    for (const auto& cell : cells) {
      double p = 0.0;
      double epsilon = std::numeric_limits<double>::infinity();
      if (cell.mu_hz > 0.0) {
        epsilon = (log_delta - std::log(cell.mu_hz)) / cell.sigma;
        p = norm_cdf(-epsilon);
      }
      const double contribution = cell.weight_per_yr * factor * p;
      total.add(contribution);
      if (inputs.keep_cells)
        row.cells.push_back({inputs.catalogue->sources[cell.source_index].source_id,
                             cell.loss_mw, cell.state_bin, contribution, epsilon});
    }
    row.rate_per_yr = total.value();
    row.return_period_yr = row.rate_per_yr > 0.0
                               ? 1.0 / row.rate_per_yr
                               : std::numeric_limits<double>::infinity();
    result.thresholds.push_back(std::move(row));
  }
  return result;
}

std::vector<double> default_threshold_grid(double lo_hz, double hi_hz, double step_hz) {
  if (!(lo_hz > 0.0) || !(step_hz > 0.0) || hi_hz < lo_hz)
    throw ConfigError("threshold grid must be positive and ascending");
  std::vector<double> grid;
  for (int t = 0;; ++t) {
    const double delta = lo_hz + step_hz * t;
    if (delta > hi_hz + 1e-12) break;
    grid.push_back(delta);
  }
  return grid;
}

HazardResult hazard_curve(HazardInputs inputs, double lo_hz, double hi_hz, double step_hz) {
  inputs.thresholds_hz = default_threshold_grid(lo_hz, hi_hz, step_hz);
  return compute_hazard(inputs);
}

std::vector<DecompositionRow> run_configuration(HazardInputs inputs) {
  inputs.keep_cells = false;
  std::vector<DecompositionRow> rows;
  for (ControlsMode mode : {ControlsMode::none, ControlsMode::dc_only,
                            ControlsMode::lfdd_only, ControlsMode::both}) {
    inputs.controls = mode;
    const HazardResult result = compute_hazard(inputs);
    DecompositionRow row;
    row.mode = mode;
    row.rates_per_yr.reserve(result.thresholds.size());
    for (const auto& t : result.thresholds) row.rates_per_yr.push_back(t.rate_per_yr);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pfha
