#ifndef PFHA_MATHUTIL_HPP
#define PFHA_MATHUTIL_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pfha {

// Standard normal CDF via the complementary error function.
inline double norm_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// Regularised lower incomplete gamma P(a, x), series/continued-fraction form.
double reg_inc_gamma(double a, double x);

// Quantile of the unit-scale Gamma(shape) distribution, bisection on
// reg_inc_gamma to 1e-10.
double gamma_quantile(double shape, double p);

// Compensated accumulator; the hazard sum spans ~12 orders of magnitude.
class KahanSum {
public:
  // Neumaier variant: the carry also survives |x| > |sum|, so interleaved
  // large/small magnitudes cancel exactly.
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Unweighted least squares of y on x. Degenerate x (zero variance) gives
// slope 0 and intercept = mean(y).
OlsFit ols_fit(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
double stdev(std::span<const double> v);  // population (divide by n)
double sample_correlation(std::span<const double> a, std::span<const double> b);

// Deterministic generator with hand-rolled variates so that output streams
// do not depend on the standard library's distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64();
  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);
  double normal();                     // polar Box-Muller, cached spare
  double normal(double mu, double sigma) { return mu + sigma * normal(); }
  double exponential(double rate);
  // Arrival counting; exact for the moderate means used here.
  int poisson(double mean);

private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// FNV-1a over bytes; used for config hashing.
std::uint64_t fnv1a_hash(const void* data, std::size_t len);
std::uint64_t fnv1a_hash(const std::string& s);

}  // namespace pfha

#endif
