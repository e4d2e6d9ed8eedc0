#ifndef PFHA_PMF_HPP
#define PFHA_PMF_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace pfha {

struct GenerationSample {
  std::int64_t timestamp_epoch_s = 0;
  double output_mw = 0.0;
};

// Discretised loss-size distribution on a uniform lattice. Bin j represents
// losses near value_at(j) = first_value_mw + j * bin_width_mw (the bin
// centre); the bin spans [value - width/2, value + width/2).
struct LossPMF {
  double first_value_mw = 0.0;
  double bin_width_mw = 25.0;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double value_at(std::size_t j) const {
    return first_value_mw + static_cast<double>(j) * bin_width_mw;
  }
  double max_value_mw() const;
  double mean_mw() const;
  double weight_sum() const;

  // Weight of the bin containing loss_mw, 0 outside the support.
  double weight_near(double loss_mw) const;

  static LossPMF delta(double value_mw, double bin_width_mw = 25.0);
};

// Histogram positive-generation periods into uniform bins aligned to
// multiples of bin_width. Outputs above max_credible_loss are clamped into
// the top bin (the last bin whose centre is <= max_credible_loss) so that
// total trip probability is preserved. Fails when fewer than min_samples
// positive periods remain.
LossPMF build_pmf(std::span<const GenerationSample> records,
                  double max_credible_loss_mw, double bin_width_mw,
                  std::size_t min_samples = 100);

}  // namespace pfha

#endif
