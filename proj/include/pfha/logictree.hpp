#ifndef PFHA_LOGICTREE_HPP
#define PFHA_LOGICTREE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pfha/hazard.hpp"

namespace pfha {

enum class OccurrenceModel { poisson, compound };

std::string to_string(OccurrenceModel model);

struct FrpeBranch {
  FrpeKind kind = FrpeKind::sfr;
  double weight = 0.0;
};

struct ValueBranch {
  double value = 0.0;
  double weight = 0.0;
};

struct OccurrenceBranch {
  OccurrenceModel model = OccurrenceModel::poisson;
  double weight = 0.0;
};

struct LogicTreeSpec {
  std::vector<FrpeBranch> frpe;
  std::vector<ValueBranch> sigma0;
  std::vector<ValueBranch> bias;
  std::vector<OccurrenceBranch> occurrence;
  std::vector<ValueBranch> dc_effectiveness;
  std::vector<ValueBranch> lfdd_effectiveness;
  // Compound occurrence: scaling applied to pair rates on compound paths.
  // Kept at 1.0 (indistinguishable from Poisson) until calibrated.
  double compound_rate_multiplier = 1.0;

  static LogicTreeSpec defaults();
  void validate() const;
};

struct LogicTreePath {
  int index = 0;
  FrpeKind frpe = FrpeKind::sfr;
  double sigma0 = 0.0;
  double bias = 0.0;
  OccurrenceModel occurrence = OccurrenceModel::poisson;
  double dc_effectiveness = 0.0;
  double lfdd_effectiveness = 0.0;
  double weight = 0.0;

  std::string descriptor() const;
};

// Full Cartesian product of the six branches. The bias parameter rides along
// on physics paths (its weight still multiplies) but the engine ignores it.
std::vector<LogicTreePath> enumerate_paths(const LogicTreeSpec& spec);

// Base inputs overridden by one path's branch choices.
HazardInputs path_inputs(const HazardInputs& base, const LogicTreePath& path,
                         const LogicTreeSpec& spec);

// Smallest rate whose cumulative sorted weight exceeds p.
double weighted_percentile(std::span<const double> rates, std::span<const double> weights,
                           double p);

struct FractileRow {
  double threshold_hz = 0.0;
  double mean = 0.0;
  double p05 = 0.0;
  double median = 0.0;
  double p95 = 0.0;
};

struct TreeResult {
  std::vector<LogicTreePath> paths;
  std::vector<std::vector<double>> path_rates;  // [path][threshold]
  std::vector<FractileRow> fractiles;
  std::size_t distinct_evaluations = 0;  // physics bias-collapse bookkeeping
};

TreeResult evaluate_tree(const LogicTreeSpec& spec, const HazardInputs& base,
                         int threads = 0);

// The highest-weight option of every branch.
LogicTreePath central_path(const LogicTreeSpec& spec);

struct TornadoRow {
  std::string branch;
  double low_rate = 0.0;
  double high_rate = 0.0;
  double swing = 0.0;  // high / low
};

// One-at-a-time branch sweeps around the central path at a single threshold,
// sorted by descending swing.
std::vector<TornadoRow> tornado(const LogicTreeSpec& spec, const HazardInputs& base,
                                double threshold_hz);

}  // namespace pfha

#endif
