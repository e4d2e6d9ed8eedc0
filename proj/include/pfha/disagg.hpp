#ifndef PFHA_DISAGG_HPP
#define PFHA_DISAGG_HPP

#include <span>
#include <string>
#include <vector>

#include "pfha/hazard.hpp"

namespace pfha {

enum class DisaggDimension {
  source,
  loss_size,
  state,
  epsilon,
  size_inertia_epsilon,
  size_demand,
};

DisaggDimension parse_disagg_dimension(const std::string& text);
std::string to_string(DisaggDimension dim);

struct DisaggKey {
  std::string column;
  std::string value;
};

struct DisaggCell {
  std::vector<DisaggKey> keys;
  double fraction = 0.0;
  double contribution_per_yr = 0.0;
  double mean_epsilon = 0.0;  // contribution-weighted
};

struct DisaggOptions {
  double inertia_band_gva_s = 10.0;
  double demand_band_gw = 5.0;
  std::vector<double> epsilon_edges{0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
};

// Band index 0 is everything below the first edge; index n is everything at
// or above the last. Interior bands are left-closed.
int epsilon_band_index(double epsilon, std::span<const double> edges);
std::string epsilon_band_label(int band, std::span<const double> edges);

// Groups the retained per-cell contributions at one threshold by the
// requested key set; fractions are shares of the threshold's total rate.
std::vector<DisaggCell> disaggregate(const HazardResult& result,
                                     const std::vector<StateBin>& state_bins,
                                     double threshold_hz, DisaggDimension dimension,
                                     const DisaggOptions& options = {});

}  // namespace pfha

#endif
