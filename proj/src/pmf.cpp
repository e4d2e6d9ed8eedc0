#include "pfha/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfha/common.hpp"
#include "pfha/mathutil.hpp"

namespace pfha {

double LossPMF::max_value_mw() const {
  return weights.empty() ? first_value_mw : value_at(weights.size() - 1);
}

double LossPMF::mean_mw() const {
  KahanSum s;
  for (std::size_t j = 0; j < weights.size(); ++j) s.add(weights[j] * value_at(j));
  return s.value();
}

double LossPMF::weight_sum() const {
  KahanSum s;
  for (double w : weights) s.add(w);
  return s.value();
}

double LossPMF::weight_near(double loss_mw) const {
  const double idx = std::round((loss_mw - first_value_mw) / bin_width_mw);
  if (idx < 0.0 || idx >= static_cast<double>(weights.size())) return 0.0;
  const auto j = static_cast<std::size_t>(idx);
  if (std::fabs(value_at(j) - loss_mw) > 0.5 * bin_width_mw) return 0.0;
  return weights[j];
}

LossPMF LossPMF::delta(double value_mw, double bin_width_mw) {
  LossPMF p;
  p.first_value_mw = value_mw;
  p.bin_width_mw = bin_width_mw;
  p.weights = {1.0};
  return p;
}

LossPMF build_pmf(std::span<const GenerationSample> records,
                  double max_credible_loss_mw, double bin_width_mw,
                  std::size_t min_samples) {
  if (bin_width_mw <= 0.0) throw DataError("build_pmf: bin width must be positive");
  if (max_credible_loss_mw <= 0.0)
    throw DataError("build_pmf: max credible loss must be positive");

  // Top bin: last lattice bin whose centre stays at or below the credible
  // maximum, so the PMF mean can never exceed it.
  const auto top = static_cast<std::int64_t>(
      std::max(0.0, std::floor(max_credible_loss_mw / bin_width_mw - 0.5)));

  std::vector<std::int64_t> indices;
  indices.reserve(records.size());
  for (const auto& rec : records) {
    if (rec.output_mw <= 0.0) continue;
    auto idx = static_cast<std::int64_t>(std::floor(rec.output_mw / bin_width_mw));
    indices.push_back(std::min(idx, top));
  }
  if (indices.empty()) throw DataError("build_pmf: no positive-generation periods");
  if (indices.size() < min_samples)
    throw DataError("build_pmf: only " + std::to_string(indices.size()) +
                    " positive-generation periods, need " + std::to_string(min_samples));

  const auto [lo_it, hi_it] = std::minmax_element(indices.begin(), indices.end());
  const std::int64_t lo = *lo_it, hi = *hi_it;

  LossPMF pmf;
  pmf.bin_width_mw = bin_width_mw;
  pmf.first_value_mw = (static_cast<double>(lo) + 0.5) * bin_width_mw;
  pmf.weights.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  const double w = 1.0 / static_cast<double>(indices.size());
  for (std::int64_t idx : indices) pmf.weights[static_cast<std::size_t>(idx - lo)] += w;
  return pmf;
}

}  // namespace pfha
