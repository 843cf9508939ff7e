#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace mfgsim::stats {

// Two-sided Fisher exact p for the 2x2 table [[a, b], [c, d]]: sum of all
// hypergeometric outcomes (margins fixed) whose probability does not exceed
// the observed one, with a relative tie tolerance of 1e-7. Log-factorial
// accumulation keeps extreme tables (p ~ 1e-12) representable.
double fishers_exact(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

// Wilson score interval for k successes in n trials.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};
Interval wilson_ci(std::int64_t k, std::int64_t n, double z = 1.96);

// Effect size between two proportions: 2*asin(sqrt(p1)) - 2*asin(sqrt(p2)).
double cohens_h(double p1, double p2);

// Student-t 97.5% quantile; exact table for df 1..30, 1.96 beyond.
double t_quantile_975(int df);

// mean +- t_{0.025,n-1} * s / sqrt(n). defined is false for n < 2.
struct MeanCi {
  int n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool defined = false;
};
MeanCi t_ci95(std::span<const double> xs);

// One-sample Kolmogorov-Smirnov against the discrete uniform on integers
// [lo, hi]. The continuous critical value 1.358/sqrt(n) at alpha = 0.05 is
// conservative for discrete supports.
struct KsResult {
  double d = 0.0;
  double critical = 0.0;
  bool pass = false;
};
KsResult ks_uniform_int(std::span<const std::int64_t> sample, std::int64_t lo,
                        std::int64_t hi, double alpha = 0.05);

}  // namespace mfgsim::stats
