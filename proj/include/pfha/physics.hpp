#ifndef PFHA_PHYSICS_HPP
#define PFHA_PHYSICS_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pfha/common.hpp"

namespace pfha {

struct GovernorProfile {
  double delay_s = 1.0;  // pure delay before any delivery
  double ramp_s = 9.0;   // linear ramp to full droop-proportional output
  double droop = 0.04;
};

struct DcProfile {
  double deadband_hz = 0.2;       // 49.8 Hz
  double full_delivery_hz = 0.5;  // 49.5 Hz
  double delay_s = 0.2;
  double ramp_s = 0.8;            // full delivery by 1 s
  double creep_fraction = 0.05;   // sustained growth beyond nominal delivery
  double creep_ramp_s = 10.0;
};

// Dynamic Moderation / Dynamic Regulation: proportional within a deviation
// band, volume sized as a fraction of response holdings.
struct ProportionalService {
  double volume_fraction = 0.05;
  double band_lo_hz = 0.1;
  double band_hi_hz = 0.2;
  double delay_s = 0.5;
  double ramp_s = 0.5;
};

struct StaticBlock {
  double trigger_deviation_hz = 0.3;  // 49.7 Hz
  double block_mw = 150.0;
};

struct SimConfig {
  double f0 = kNominalFrequencyHz;
  double step_s = 0.02;
  double horizon_s = 60.0;
  // Fraction of demand shed per Hz of deviation (2.5 %/Hz).
  double load_damping_coeff = 0.025;
  GovernorProfile governor;
  DcProfile dc;
  ProportionalService dm{0.05, 0.1, 0.2, 0.5, 0.5};
  ProportionalService dr{0.05, 0.015, 0.2, 0.5, 0.5};
  std::vector<StaticBlock> static_response{{0.3, 150.0}, {0.4, 150.0}};

  void validate() const;
  // Canonical serialisation; identical configs hash identically.
  std::string canonical_string() const;
};

struct TrajectoryPoint {
  double t_s = 0.0;
  double deviation_hz = 0.0;
  double net_power_mw = 0.0;  // loss minus injections minus damping
};

struct SimResult {
  double nadir_hz = 0.0;
  std::vector<TrajectoryPoint> trajectory;  // only when requested
};

// Single-bus time-domain integration of the swing equation with explicit
// service delivery profiles; RK4 at the configured step. Returns the deepest
// deviation reached over the horizon.
SimResult simulate_trajectory(double loss_mw, double inertia_gva_s, double demand_gw,
                              double response_mw, double dc_effective_mw,
                              const SimConfig& config, bool keep_trajectory = false);

double simulate_nadir(double loss_mw, double inertia_gva_s, double demand_gw,
                      double response_mw, double dc_effective_mw,
                      const SimConfig& config);

struct GridAxes {
  std::vector<double> loss_mw;        // 7 primary values, 200-1800
  std::vector<double> inertia_gva_s;  // 7, 80-350
  std::vector<double> demand_gw;      // 5, 15-45
  std::vector<double> response_mw;    // 5, 500-3000
  std::vector<double> dc_mw;          // 5, 0-1200

  static GridAxes defaults();
};

// Pre-computed nadir lookup. Axes are the primary ranges extended one
// uniform step at a time past the top: six extra loss nodes (pair events
// produce combined losses well past 1800 MW) and one extra demand node
// (cold-peak demand past 45 GW), giving 13x7x6x5x5 = 13,650 stored points of
// which 7x7x5x5x5 = 6,125 are simulated and the rest are nearest-neighbour
// fills flagged in the mask.
class NadirGrid {
public:
  static constexpr int kDims = 5;

  const std::array<std::vector<double>, kDims>& axes() const { return axes_; }
  const std::array<std::size_t, kDims>& primary_counts() const { return primary_; }
  std::size_t total_points() const { return values_.size(); }
  std::size_t primary_points() const;
  std::size_t boundary_points() const { return total_points() - primary_points(); }
  std::uint64_t config_hash() const { return config_hash_; }

  double value_at(const std::array<std::size_t, kDims>& idx) const;
  bool boundary_filled_at(const std::array<std::size_t, kDims>& idx) const;

  // Multilinear interpolation over the enclosing 32 nodes; queries outside
  // the axis ranges clamp with a warning.
  double interpolate(double loss_mw, double inertia_gva_s, double demand_gw,
                     double response_mw, double dc_mw) const;

  void save(const std::filesystem::path& path) const;
  static NadirGrid load(const std::filesystem::path& path);

  friend NadirGrid build_grid(const SimConfig& config, const GridAxes& axes,
                              int threads);

private:
  std::array<std::vector<double>, kDims> axes_;
  std::array<std::size_t, kDims> primary_{};
  std::vector<double> values_;
  std::vector<char> boundary_filled_;
  std::uint64_t config_hash_ = 0;

  std::size_t flat_index(const std::array<std::size_t, kDims>& idx) const;
};

std::uint64_t grid_config_hash(const SimConfig& config, const GridAxes& axes);

NadirGrid build_grid(const SimConfig& config, const GridAxes& axes = GridAxes::defaults(),
                     int threads = 0);

}  // namespace pfha

#endif
