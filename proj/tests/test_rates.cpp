#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pfha/mathutil.hpp"
#include "pfha/rates.hpp"

using namespace pfha;

TEST_CASE("posterior mean formula") {
  CHECK(posterior_rate({PriorClass::ccgt, 1.0, 2.0}, {"s", 0, 4.0}) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  // Fixed point: prior mean equals MLE.
  CHECK(posterior_rate({PriorClass::ccgt, 1.0, 1.0}, {"s", 3, 3.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Data-dominated: 53 trips in 4 years.
  const double heavy = posterior_rate({PriorClass::interconnector, 1.0, 1.0}, {"s", 53, 4.0});
  CHECK(heavy == doctest::Approx(10.8).epsilon(1e-12));
  CHECK(std::abs(heavy - 53.0 / 4.0) < std::abs(heavy - 1.0));
}

TEST_CASE("posterior mean properties on random inputs") {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    GammaPrior prior{PriorClass::wind, rng.uniform(0.2, 5.0), rng.uniform(0.2, 10.0)};
    const int n = rng.poisson(4.0);
    const double t = rng.uniform(0.5, 20.0);
    const double post = posterior_rate(prior, {"s", n, t});
    CHECK(post > 0.0);
    CHECK(post == doctest::Approx((prior.alpha + n) / (prior.beta + t)).epsilon(1e-12));

    // Convex combination of prior mean and MLE with weight beta/(beta+T).
    const double w = prior.beta / (prior.beta + t);
    const double blend = w * (prior.alpha / prior.beta) + (1.0 - w) * (n / t);
    CHECK(post == doctest::Approx(blend).epsilon(1e-9));

    // Monotone in n, antitone in T.
    CHECK(posterior_rate(prior, {"s", n + 1, t}) > post);
    CHECK(posterior_rate(prior, {"s", n, t + 1.0}) < post);
  }
}

TEST_CASE("equal-tailed credible interval") {
  // Gamma(1, 0.5 + 0.5) posterior is Exp(1).
  const auto [lo, hi] = credible_interval({PriorClass::ccgt, 1.0, 0.5}, {"s", 0, 0.5}, 0.90);
  CHECK(lo == doctest::Approx(0.0512932944).epsilon(1e-6));
  CHECK(hi == doctest::Approx(2.99573227).epsilon(1e-6));

  GammaPrior prior{PriorClass::nuclear, 2.0, 3.0};
  IncidentCount count{"s", 4, 5.0};
  const double post = posterior_rate(prior, count);
  const auto [l2, h2] = credible_interval(prior, count, 0.95);
  CHECK(l2 > 0.0);
  CHECK(l2 < post);
  CHECK(post < h2);

  // Narrow level collapses toward the posterior median.
  const auto [l3, h3] = credible_interval(prior, count, 0.02);
  CHECK(h3 - l3 < h2 - l2);
}

TEST_CASE("default priors: unit shape, class-specific means") {
  const auto priors = default_priors();
  REQUIRE(priors.size() == 6);
  for (const auto& [cls, prior] : priors) {
    CHECK(prior.alpha == doctest::Approx(1.0));
    CHECK(prior.beta > 0.0);
  }
  CHECK(1.0 / priors.at(PriorClass::wind).beta == doctest::Approx(0.425).epsilon(1e-9));
  CHECK(1.0 / priors.at(PriorClass::ccgt).beta == doctest::Approx(2.20).epsilon(1e-9));
  CHECK(1.0 / priors.at(PriorClass::interconnector).beta ==
        doctest::Approx(6.895).epsilon(1e-9));
}

TEST_CASE("priors file overrides defaults") {
  const auto path = std::filesystem::temp_directory_path() / "pfha_priors.csv";
  {
    std::ofstream out(path, std::ios::binary);
    out << "prior_class,alpha,beta\nwind,2.0,8.0\n";
  }
  const auto priors = load_priors(path);
  CHECK(priors.at(PriorClass::wind).alpha == doctest::Approx(2.0));
  CHECK(priors.at(PriorClass::wind).beta == doctest::Approx(8.0));
  // Untouched classes keep their defaults.
  CHECK(priors.at(PriorClass::ccgt).beta ==
        doctest::Approx(default_priors().at(PriorClass::ccgt).beta));
}

TEST_CASE("incident counting with catch-all assignment") {
  std::vector<Incident> incidents;
  auto add = [&](std::int64_t ts, const std::string& src) {
    Incident inc;
    inc.timestamp_epoch_s = ts;
    inc.source_id = src;
    incidents.push_back(inc);
  };
  const std::int64_t year = 31557600;  // 365.25 d
  add(0, "GEN-A");
  add(1 * year, "GEN-A");
  add(2 * year, "IC-1");
  add(3 * year, "");  // unmatched
  add(4 * year, "");

  const auto counts = count_incidents(incidents, 10.0, "FLEET");
  auto find = [&](const std::string& id) -> const IncidentCount* {
    for (const auto& c : counts)
      if (c.source_id == id) return &c;
    return nullptr;
  };
  REQUIRE(find("GEN-A") != nullptr);
  CHECK(find("GEN-A")->n_events == 2);
  CHECK(find("GEN-A")->observation_years == doctest::Approx(10.0));
  CHECK(find("IC-1")->n_events == 1);
  REQUIRE(find("FLEET") != nullptr);
  CHECK(find("FLEET")->n_events == 2);

  // Window inferred from the data span when not supplied.
  const auto inferred = count_incidents(incidents, 0.0, "");
  CHECK(inferred.front().observation_years == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("apply_rates fills every source with a positive rate") {
  Catalogue cat;
  SourceRecord a;
  a.source_id = "GEN-A";
  a.prior_class = PriorClass::ccgt;
  SourceRecord b;
  b.source_id = "QUIET";
  b.prior_class = PriorClass::nuclear;
  cat.sources = {a, b};

  std::vector<IncidentCount> counts{{"GEN-A", 8, 10.0}};
  apply_rates(cat, default_priors(), counts);
  const double beta_ccgt = default_priors().at(PriorClass::ccgt).beta;
  CHECK(cat.find("GEN-A")->trip_rate_per_yr ==
        doctest::Approx((1.0 + 8.0) / (beta_ccgt + 10.0)).epsilon(1e-12));
  // Zero observed trips over the shared window: prior-shrunk, never zero.
  const double beta_nuclear = default_priors().at(PriorClass::nuclear).beta;
  CHECK(cat.find("QUIET")->trip_rate_per_yr ==
        doctest::Approx(1.0 / (beta_nuclear + 10.0)).epsilon(1e-12));
  CHECK(cat.find("QUIET")->trip_rate_per_yr > 0.0);
}
