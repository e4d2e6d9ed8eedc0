#include "pfha/logictree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "pfha/csv.hpp"
#include "pfha/mathutil.hpp"

namespace pfha {

std::string to_string(OccurrenceModel model) {
  return model == OccurrenceModel::poisson ? "poisson" : "compound";
}

LogicTreeSpec LogicTreeSpec::defaults() {
  LogicTreeSpec spec;
  spec.frpe = {{FrpeKind::sfr, 0.40}, {FrpeKind::physics, 0.60}};
  spec.sigma0 = {{0.20, 0.25}, {0.296, 0.50}, {0.40, 0.25}};
  spec.bias = {{0.30, 0.30}, {0.37, 0.40}, {0.50, 0.30}};
  spec.occurrence = {{OccurrenceModel::poisson, 0.70}, {OccurrenceModel::compound, 0.30}};
  spec.dc_effectiveness = {{0.70, 0.25}, {0.85, 0.50}, {0.95, 0.25}};
  spec.lfdd_effectiveness = {{0.70, 0.25}, {0.85, 0.50}, {0.95, 0.25}};
  return spec;
}

namespace {

template <typename Branch>
void check_branch(const std::vector<Branch>& options, const char* name) {
  if (options.empty())
    throw ConfigError(std::string("logic-tree branch ") + name + " has no options");
  double sum = 0.0;
  for (const auto& option : options) {
    if (option.weight < 0.0)
      throw ConfigError(std::string("logic-tree branch ") + name +
                        " has a negative weight");
    sum += option.weight;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ConfigError(std::string("logic-tree branch ") + name + " weights sum to " +
                      format_g9(sum) + ", expected 1");
}

}  // namespace

void LogicTreeSpec::validate() const {
  check_branch(frpe, "frpe");
  check_branch(sigma0, "sigma0");
  check_branch(bias, "bias");
  check_branch(occurrence, "occurrence");
  check_branch(dc_effectiveness, "dc_effectiveness");
  check_branch(lfdd_effectiveness, "lfdd_effectiveness");
  if (!(compound_rate_multiplier > 0.0))
    throw ConfigError("compound rate multiplier must be positive");
}

std::string LogicTreePath::descriptor() const {
  std::ostringstream os;
  os << "path " << index << " (" << to_string(frpe) << ", sigma0=" << format_g9(sigma0)
     << ", bias=" << format_g9(bias) << ", " << to_string(occurrence)
     << ", dc=" << format_g9(dc_effectiveness)
     << ", lfdd=" << format_g9(lfdd_effectiveness) << ")";
  return os.str();
}

std::vector<LogicTreePath> enumerate_paths(const LogicTreeSpec& spec) {
  spec.validate();
  std::vector<LogicTreePath> paths;
  paths.reserve(spec.frpe.size() * spec.sigma0.size() * spec.bias.size() *
                spec.occurrence.size() * spec.dc_effectiveness.size() *
                spec.lfdd_effectiveness.size());
  int index = 0;
  for (const auto& f : spec.frpe)
    for (const auto& s : spec.sigma0)
      for (const auto& b : spec.bias)
        for (const auto& o : spec.occurrence)
          for (const auto& d : spec.dc_effectiveness)
            for (const auto& l : spec.lfdd_effectiveness) {
              LogicTreePath path;
              path.index = index++;
              path.frpe = f.kind;
              path.sigma0 = s.value;
              path.bias = b.value;
              path.occurrence = o.model;
              path.dc_effectiveness = d.value;
              path.lfdd_effectiveness = l.value;
              path.weight =
                  f.weight * s.weight * b.weight * o.weight * d.weight * l.weight;
              paths.push_back(path);
            }
  return paths;
}

HazardInputs path_inputs(const HazardInputs& base, const LogicTreePath& path,
                         const LogicTreeSpec& spec) {
  HazardInputs in = base;
  in.frpe = path.frpe;
  in.sfr.bias = path.bias;
  in.sigma = path.frpe == FrpeKind::sfr ? SigmaParams::analytical(path.sigma0)
                                        : SigmaParams::physics(path.sigma0);
  in.dc.effectiveness = path.dc_effectiveness;
  in.lfdd.relay_effectiveness = path.lfdd_effectiveness;
  in.pair_rate_multiplier = path.occurrence == OccurrenceModel::compound
                                ? spec.compound_rate_multiplier
                                : 1.0;
  in.keep_cells = false;
  return in;
}

double weighted_percentile(std::span<const double> rates, std::span<const double> weights,
                           double p) {
  if (rates.empty() || rates.size() != weights.size())
    throw ConfigError("percentile needs matching non-empty rate and weight lists");
  std::vector<std::size_t> order(rates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rates[a] < rates[b]; });
  double cumulative = 0.0;
  for (std::size_t k : order) {
    cumulative += weights[k];
    if (cumulative > p) return rates[k];
  }
  return rates[order.back()];
}

namespace {

std::vector<double> rates_for(const HazardInputs& in) {
  const HazardResult result = compute_hazard(in);
  std::vector<double> rates;
  rates.reserve(result.thresholds.size());
  for (const auto& t : result.thresholds) rates.push_back(t.rate_per_yr);
  return rates;
}

}  // namespace

TreeResult evaluate_tree(const LogicTreeSpec& spec, const HazardInputs& base,
                         int threads) {
  TreeResult result;
  result.paths = enumerate_paths(spec);
  const std::size_t n_thresholds = base.thresholds_hz.size();

  // Physics paths ignore the bias branch, so the three bias options share one
  // evaluation; key bias by a sentinel to collapse them.
  std::map<std::array<double, 6>, std::size_t> eval_of_key;
  std::vector<std::size_t> path_eval(result.paths.size());
  std::vector<const LogicTreePath*> eval_path;
  for (std::size_t p = 0; p < result.paths.size(); ++p) {
    const LogicTreePath& path = result.paths[p];
    std::array<double, 6> key{path.frpe == FrpeKind::sfr ? 0.0 : 1.0,
                              path.sigma0,
                              path.frpe == FrpeKind::sfr ? path.bias : -1.0,
                              path.occurrence == OccurrenceModel::poisson ? 0.0 : 1.0,
                              path.dc_effectiveness,
                              path.lfdd_effectiveness};
    auto [it, inserted] = eval_of_key.try_emplace(key, eval_path.size());
    if (inserted) eval_path.push_back(&path);
    path_eval[p] = it->second;
  }
  result.distinct_evaluations = eval_path.size();

  std::vector<std::vector<double>> eval_rates(eval_path.size());
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const LogicTreePath& path = *eval_path[e];
      try {
        eval_rates[e] = rates_for(path_inputs(base, path, spec));
      } catch (const ConfigError& err) {
        throw ConfigError(path.descriptor() + ": " + err.what());
      } catch (const DataError& err) {
        throw DataError(path.descriptor() + ": " + err.what());
      } catch (const NumericError& err) {
        throw NumericError(path.descriptor() + ": " + err.what());
      }
    }
  };

  unsigned nthreads = threads > 0 ? static_cast<unsigned>(threads)
                                  : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<unsigned>(nthreads, 64);
  if (nthreads <= 1 || eval_path.size() < 2) {
    run_range(0, eval_path.size());
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    const std::size_t chunk = (eval_path.size() + nthreads - 1) / nthreads;
    for (unsigned ti = 0; ti < nthreads; ++ti) {
      const std::size_t begin = std::min(eval_path.size(), ti * chunk);
      const std::size_t end = std::min(eval_path.size(), begin + chunk);
      pool.emplace_back([&, begin, end, ti] {
        try {
          run_range(begin, end);
        } catch (...) {
          errors[ti] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  result.path_rates.resize(result.paths.size());
  for (std::size_t p = 0; p < result.paths.size(); ++p)
    result.path_rates[p] = eval_rates[path_eval[p]];

  result.fractiles.reserve(n_thresholds);
  std::vector<double> rates(result.paths.size());
  std::vector<double> weights(result.paths.size());
  for (std::size_t p = 0; p < result.paths.size(); ++p)
    weights[p] = result.paths[p].weight;
  for (std::size_t t = 0; t < n_thresholds; ++t) {
    for (std::size_t p = 0; p < result.paths.size(); ++p)
      rates[p] = result.path_rates[p][t];
    FractileRow row;
    row.threshold_hz = base.thresholds_hz[t];
    KahanSum mean;
    for (std::size_t p = 0; p < rates.size(); ++p) mean.add(weights[p] * rates[p]);
    row.mean = mean.value();
    row.p05 = weighted_percentile(rates, weights, 0.05);
    row.median = weighted_percentile(rates, weights, 0.50);
    row.p95 = weighted_percentile(rates, weights, 0.95);
    result.fractiles.push_back(row);
  }
  return result;
}

namespace {

template <typename Branch>
const Branch& heaviest(const std::vector<Branch>& options) {
  const Branch* best = &options.front();
  for (const auto& option : options)
    if (option.weight > best->weight) best = &option;
  return *best;
}

}  // namespace

LogicTreePath central_path(const LogicTreeSpec& spec) {
  spec.validate();
  LogicTreePath path;
  path.index = -1;
  path.frpe = heaviest(spec.frpe).kind;
  path.sigma0 = heaviest(spec.sigma0).value;
  path.bias = heaviest(spec.bias).value;
  path.occurrence = heaviest(spec.occurrence).model;
  path.dc_effectiveness = heaviest(spec.dc_effectiveness).value;
  path.lfdd_effectiveness = heaviest(spec.lfdd_effectiveness).value;
  path.weight = 1.0;
  return path;
}

std::vector<TornadoRow> tornado(const LogicTreeSpec& spec, const HazardInputs& base,
                                double threshold_hz) {
  HazardInputs single = base;
  single.thresholds_hz = {threshold_hz};
  single.keep_cells = false;
  const LogicTreePath centre = central_path(spec);

  auto rate_of = [&](const LogicTreePath& path) {
    return rates_for(path_inputs(single, path, spec)).front();
  };

  std::vector<TornadoRow> rows;
  auto sweep = [&](const char* name, auto&& apply, std::size_t count) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      LogicTreePath variant = centre;
      apply(variant, i);
      const double rate = rate_of(variant);
      if (i == 0) {
        lo = hi = rate;
      } else {
        lo = std::min(lo, rate);
        hi = std::max(hi, rate);
      }
    }
    TornadoRow row;
    row.branch = name;
    row.low_rate = lo;
    row.high_rate = hi;
    row.swing = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    rows.push_back(std::move(row));
  };

  sweep("frpe", [&](LogicTreePath& v, std::size_t i) { v.frpe = spec.frpe[i].kind; },
        spec.frpe.size());
  sweep("sigma0", [&](LogicTreePath& v, std::size_t i) { v.sigma0 = spec.sigma0[i].value; },
        spec.sigma0.size());
  sweep("bias", [&](LogicTreePath& v, std::size_t i) { v.bias = spec.bias[i].value; },
        spec.bias.size());
  sweep("occurrence",
        [&](LogicTreePath& v, std::size_t i) { v.occurrence = spec.occurrence[i].model; },
        spec.occurrence.size());
  sweep("dc_effectiveness",
        [&](LogicTreePath& v, std::size_t i) {
          v.dc_effectiveness = spec.dc_effectiveness[i].value;
        },
        spec.dc_effectiveness.size());
  sweep("lfdd_effectiveness",
        [&](LogicTreePath& v, std::size_t i) {
          v.lfdd_effectiveness = spec.lfdd_effectiveness[i].value;
        },
        spec.lfdd_effectiveness.size());

  std::stable_sort(rows.begin(), rows.end(),
                   [](const TornadoRow& a, const TornadoRow& b) { return a.swing > b.swing; });
  return rows;
}

}  // namespace pfha
