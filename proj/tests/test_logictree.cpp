#include <doctest.h>

#include <cmath>
#include <vector>

#include "pfha/logictree.hpp"
#include "pfha/mathutil.hpp"

using namespace pfha;

namespace {

const NadirGrid& shared_grid() {
  static const NadirGrid grid = [] {
    GridAxes axes;
    axes.loss_mw = {400.0, 800.0};
    axes.inertia_gva_s = {150.0, 250.0};
    axes.demand_gw = {20.0, 30.0};
    axes.response_mw = {1000.0, 2000.0};
    axes.dc_mw = {0.0, 400.0};
    return build_grid(SimConfig{}, axes, 2);
  }();
  return grid;
}

struct TreeScenario {
  Catalogue catalogue;
  std::vector<StateBin> bins;
};

const TreeScenario& shared_scenario() {
  static const TreeScenario sc = [] {
    TreeScenario s;
    Rng rng(77);
    for (int i = 0; i < 3; ++i) {
      SourceRecord src;
      src.source_id = "S" + std::to_string(i);
      src.capacity_mw = 900.0;
      src.max_credible_loss_mw = 800.0;
      src.trip_rate_per_yr = rng.uniform(0.5, 4.0);
      src.pmf.first_value_mw = 437.5;
      src.pmf.bin_width_mw = 25.0;
      src.pmf.weights.resize(5);
      double total = 0.0;
      for (double& w : src.pmf.weights) {
        w = rng.uniform(0.1, 1.0);
        total += w;
      }
      for (double& w : src.pmf.weights) w /= total;
      s.catalogue.sources.push_back(std::move(src));
    }
    // A pair source so the occurrence branch has something to scale.
    SourceRecord pair;
    pair.source_id = "PAIR";
    pair.source_type = SourceType::pair;
    pair.capacity_mw = 1800.0;
    pair.max_credible_loss_mw = 1600.0;
    pair.trip_rate_per_yr = 0.1;
    pair.pmf = LossPMF::delta(750.0);
    s.catalogue.sources.push_back(std::move(pair));

    double acc = 0.0;
    for (int k = 0; k < 5; ++k) {
      StateBin bin;
      bin.bin_index = k;
      bin.weight = k < 4 ? 0.2 : 1.0 - acc;
      acc += 0.2;
      bin.mean_inertia_gva_s = 160.0 + 20.0 * k;
      bin.mean_demand_gw = 21.0 + 2.0 * k;
      bin.mean_response_mw = 1100.0 + 180.0 * k;
      bin.mean_dc_mw = 80.0 * k;
      bin.record_count = 10;
      s.bins.push_back(bin);
    }
    return s;
  }();
  return sc;
}

HazardInputs tree_base() {
  const TreeScenario& sc = shared_scenario();
  HazardInputs in;
  in.catalogue = &sc.catalogue;
  in.state_bins = &sc.bins;
  in.grid = &shared_grid();
  in.dc.contracted_mw = 400.0;
  in.use_state_dc = false;
  in.controls = ControlsMode::both;
  in.thresholds_hz = {0.3, 0.6, 1.0};
  return in;
}

}  // namespace

TEST_CASE("default tree: 324 paths, unit weight, worked path weight") {
  const LogicTreeSpec spec = LogicTreeSpec::defaults();
  const auto paths = enumerate_paths(spec);
  REQUIRE(paths.size() == 324);

  KahanSum total;
  for (const auto& path : paths) total.add(path.weight);
  CHECK(std::abs(total.value() - 1.0) <= 1e-12);

  bool found = false;
  for (const auto& path : paths) {
    if (path.frpe == FrpeKind::sfr && path.sigma0 == 0.296 && path.bias == 0.37 &&
        path.occurrence == OccurrenceModel::poisson && path.dc_effectiveness == 0.85 &&
        path.lfdd_effectiveness == 0.85) {
      found = true;
      CHECK(path.weight == doctest::Approx(0.014).epsilon(1e-12));
    }
  }
  CHECK(found);
}

TEST_CASE("weighted percentile: cumulative-weight step rule") {
  const std::vector<double> rates{1.0, 2.0, 3.0};
  const std::vector<double> weights{0.2, 0.3, 0.5};
  CHECK(weighted_percentile(rates, weights, 0.05) == 1.0);
  CHECK(weighted_percentile(rates, weights, 0.50) == 3.0);
  CHECK(weighted_percentile(rates, weights, 0.95) == 3.0);
  // Order of the input lists is immaterial.
  const std::vector<double> r2{3.0, 1.0, 2.0};
  const std::vector<double> w2{0.5, 0.2, 0.3};
  CHECK(weighted_percentile(r2, w2, 0.50) == 3.0);
  CHECK_THROWS_AS(weighted_percentile(rates, std::vector<double>{0.5}, 0.5), ConfigError);
  CHECK_THROWS_AS(weighted_percentile(std::vector<double>{}, std::vector<double>{}, 0.5),
                  ConfigError);
}

TEST_CASE("path inputs carry every branch override") {
  LogicTreeSpec spec = LogicTreeSpec::defaults();
  spec.compound_rate_multiplier = 1.3;
  const HazardInputs base = tree_base();

  LogicTreePath path;
  path.frpe = FrpeKind::sfr;
  path.sigma0 = 0.40;
  path.bias = 0.50;
  path.occurrence = OccurrenceModel::compound;
  path.dc_effectiveness = 0.95;
  path.lfdd_effectiveness = 0.70;

  const HazardInputs in = path_inputs(base, path, spec);
  CHECK(in.frpe == FrpeKind::sfr);
  CHECK(in.sfr.bias == 0.50);
  CHECK(in.sigma.sigma0 == 0.40);
  CHECK(in.sigma.inertia_coeff == doctest::Approx(0.2));  // analytical scaling
  CHECK(in.sigma.size_coeff == doctest::Approx(0.1));
  CHECK(in.dc.effectiveness == 0.95);
  CHECK(in.lfdd.relay_effectiveness == 0.70);
  CHECK(in.pair_rate_multiplier == doctest::Approx(1.3));

  path.frpe = FrpeKind::physics;
  path.occurrence = OccurrenceModel::poisson;
  const HazardInputs phys = path_inputs(base, path, spec);
  CHECK(phys.sigma.inertia_coeff == doctest::Approx(0.1));  // physics scaling
  CHECK(phys.sigma.size_coeff == 0.0);
  CHECK(phys.pair_rate_multiplier == 1.0);
}

TEST_CASE("central path picks the heaviest option per branch") {
  const LogicTreePath centre = central_path(LogicTreeSpec::defaults());
  CHECK(centre.frpe == FrpeKind::physics);
  CHECK(centre.sigma0 == 0.296);
  CHECK(centre.bias == 0.37);
  CHECK(centre.occurrence == OccurrenceModel::poisson);
  CHECK(centre.dc_effectiveness == 0.85);
  CHECK(centre.lfdd_effectiveness == 0.85);
}

TEST_CASE("tree evaluation: memoisation, mean, and fractile consistency") {
  const LogicTreeSpec spec = LogicTreeSpec::defaults();
  const HazardInputs base = tree_base();
  const TreeResult tree = evaluate_tree(spec, base, 2);

  REQUIRE(tree.paths.size() == 324);
  REQUIRE(tree.path_rates.size() == 324);
  CHECK(tree.distinct_evaluations == 216);

  // Physics paths differing only in bias share rates exactly.
  for (std::size_t p = 0; p < tree.paths.size(); ++p) {
    if (tree.paths[p].frpe != FrpeKind::physics) continue;
    for (std::size_t q = p + 1; q < tree.paths.size(); ++q) {
      const auto& a = tree.paths[p];
      const auto& b = tree.paths[q];
      if (b.frpe == FrpeKind::physics && a.sigma0 == b.sigma0 &&
          a.occurrence == b.occurrence && a.dc_effectiveness == b.dc_effectiveness &&
          a.lfdd_effectiveness == b.lfdd_effectiveness)
        CHECK(tree.path_rates[p] == tree.path_rates[q]);
    }
    break;  // one representative suffices
  }

  // Spot-check stored path rates against fresh standalone evaluations.
  for (std::size_t p : {std::size_t{0}, std::size_t{100}, std::size_t{323}}) {
    const HazardResult fresh = compute_hazard(path_inputs(base, tree.paths[p], spec));
    for (std::size_t t = 0; t < base.thresholds_hz.size(); ++t)
      CHECK(tree.path_rates[p][t] == fresh.thresholds[t].rate_per_yr);
  }

  // Mean fractile equals the direct weighted sum; fractiles are ordered.
  REQUIRE(tree.fractiles.size() == base.thresholds_hz.size());
  for (std::size_t t = 0; t < tree.fractiles.size(); ++t) {
    KahanSum mean;
    for (std::size_t p = 0; p < tree.paths.size(); ++p)
      mean.add(tree.paths[p].weight * tree.path_rates[p][t]);
    CHECK(tree.fractiles[t].mean ==
          doctest::Approx(mean.value()).epsilon(1e-12));
    CHECK(tree.fractiles[t].p05 <= tree.fractiles[t].median);
    CHECK(tree.fractiles[t].median <= tree.fractiles[t].p95);
    CHECK(tree.fractiles[t].p05 >= 0.0);
  }

  // Thread count does not change a single byte of the result.
  const TreeResult serial = evaluate_tree(spec, base, 1);
  CHECK(serial.path_rates == tree.path_rates);
  for (std::size_t t = 0; t < tree.fractiles.size(); ++t) {
    CHECK(serial.fractiles[t].mean == tree.fractiles[t].mean);
    CHECK(serial.fractiles[t].median == tree.fractiles[t].median);
  }
}

TEST_CASE("tornado: six sorted sweeps, exact physics bias collapse") {
  const LogicTreeSpec spec = LogicTreeSpec::defaults();
  const HazardInputs base = tree_base();
  const auto rows = tornado(spec, base, 0.6);
  REQUIRE(rows.size() == 6);

  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].swing >= rows[i].swing);
  for (const auto& row : rows) {
    CHECK(row.high_rate >= row.low_rate);
    CHECK(row.swing == doctest::Approx(row.high_rate / row.low_rate).epsilon(1e-12));
  }

  // The central engine is physics, which ignores the bias multiplier: the
  // bias sweep collapses to a flat line.
  bool saw_bias = false;
  for (const auto& row : rows) {
    if (row.branch == "bias") {
      saw_bias = true;
      CHECK(row.swing == 1.0);
      CHECK(row.low_rate == row.high_rate);
    }
  }
  CHECK(saw_bias);
}

TEST_CASE("logic-tree validation failures") {
  LogicTreeSpec bad = LogicTreeSpec::defaults();
  bad.sigma0[0].weight = 0.30;  // sums to 1.05
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = LogicTreeSpec::defaults();
  bad.frpe.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = LogicTreeSpec::defaults();
  bad.bias[1].weight = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = LogicTreeSpec::defaults();
  bad.compound_rate_multiplier = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  CHECK_NOTHROW(LogicTreeSpec::defaults().validate());
}
