#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "mfgsim/exp/stats.hpp"
#include "mfgsim/util/rng.hpp"

using namespace mfgsim::stats;

namespace {

// Brute-force oracle: enumerate every table with the observed margins using
// exact binomial-coefficient ratios in long double.
long double fisher_oracle(std::int64_t a, std::int64_t b, std::int64_t c,
                          std::int64_t d) {
  const std::int64_t row1 = a + b, col1 = a + c, n = a + b + c + d;
  auto log_choose = [](std::int64_t nn, std::int64_t kk) -> long double {
    return lgammal(static_cast<long double>(nn) + 1.0L) -
           lgammal(static_cast<long double>(kk) + 1.0L) -
           lgammal(static_cast<long double>(nn - kk) + 1.0L);
  };
  const long double denom = log_choose(n, col1);
  auto p = [&](std::int64_t k) -> long double {
    if (k < 0 || k > row1 || col1 - k < 0 || col1 - k > n - row1) return 0.0L;
    return expl(log_choose(row1, k) + log_choose(n - row1, col1 - k) - denom);
  };
  const long double pobs = p(a);
  long double total = 0.0L;
  for (std::int64_t k = 0; k <= col1; ++k) {
    long double pk = p(k);
    if (pk > 0.0L && pk <= pobs * (1.0L + 1e-9L)) total += pk;
  }
  return total;
}

}  // namespace

TEST_CASE("fisher matches exact rational values") {
  // Frozen from an exact-fraction enumeration (independent of this code).
  CHECK(fishers_exact(0, 72, 31, 41) ==
        doctest::Approx(1.4716958530878546e-11).epsilon(1e-9));
  CHECK(fishers_exact(1, 9, 11, 3) ==
        doctest::Approx(0.0027594561852200836).epsilon(1e-9));
  CHECK(fishers_exact(3, 1, 1, 3) ==
        doctest::Approx(0.4857142857142857).epsilon(1e-9));
}

TEST_CASE("fisher no association gives p = 1") {
  CHECK(fishers_exact(5, 5, 5, 5) == doctest::Approx(1.0));
  CHECK(fishers_exact(0, 0, 0, 0) == doctest::Approx(1.0));
}

TEST_CASE("fisher symmetry p(a,b,c,d) = p(c,d,a,b)") {
  CHECK(fishers_exact(2, 8, 7, 3) == doctest::Approx(fishers_exact(7, 3, 2, 8)));
  CHECK(fishers_exact(0, 72, 31, 41) ==
        doctest::Approx(fishers_exact(31, 41, 0, 72)));
}

TEST_CASE("fisher matches enumeration oracle on all small tables") {
  for (std::int64_t a = 0; a <= 5; ++a)
    for (std::int64_t b = 0; b <= 5; ++b)
      for (std::int64_t c = 0; c <= 5; ++c)
        for (std::int64_t d = 0; d <= 5; ++d) {
          if (a + b + c + d == 0) continue;
          double got = fishers_exact(a, b, c, d);
          double want = static_cast<double>(fisher_oracle(a, b, c, d));
          CHECK(got == doctest::Approx(want).epsilon(1e-10));
        }
}

TEST_CASE("wilson intervals match frozen values") {
  auto z0 = wilson_ci(0, 72);
  CHECK(z0.lo == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(z0.hi == doctest::Approx(0.05065293981139638).epsilon(1e-9));
  auto z31 = wilson_ci(31, 72);
  CHECK(z31.lo == doctest::Approx(0.3225772336645315).epsilon(1e-9));
  CHECK(z31.hi == doctest::Approx(0.5455690079759403).epsilon(1e-9));
}

TEST_CASE("wilson reflection about one half") {
  auto a = wilson_ci(31, 72);
  auto b = wilson_ci(41, 72);
  CHECK(a.lo == doctest::Approx(1.0 - b.hi).epsilon(1e-12));
  CHECK(a.hi == doctest::Approx(1.0 - b.lo).epsilon(1e-12));
}

TEST_CASE("cohens h matches high-precision oracle") {
  CHECK(cohens_h(31.0 / 72.0, 0.0) ==
        doctest::Approx(1.4314569860).epsilon(1e-8));
  CHECK(cohens_h(0.5, 0.5) == doctest::Approx(0.0));
  CHECK(cohens_h(1.0, 0.0) == doctest::Approx(3.14159265358979).epsilon(1e-10));
}

TEST_CASE("t quantile table") {
  CHECK(t_quantile_975(9) == doctest::Approx(2.262));
  CHECK(t_quantile_975(1) == doctest::Approx(12.706));
  CHECK(t_quantile_975(100) == doctest::Approx(1.96));
}

TEST_CASE("t confidence interval") {
  std::vector<double> xs = {8.0, 8.1, 7.9, 8.05, 7.95, 8.0, 8.02, 7.98, 8.01, 7.99};
  auto ci = t_ci95(xs);
  REQUIRE(ci.defined);
  CHECK(ci.n == 10);
  CHECK(ci.mean == doctest::Approx(8.0).epsilon(1e-3));
  CHECK(ci.lo < 8.0);
  CHECK(ci.hi > 8.0);
  // Half width = 2.262 * s / sqrt(10); check against direct computation.
  double half = 2.262 * ci.sd / std::sqrt(10.0);
  CHECK(ci.hi - ci.mean == doctest::Approx(half).epsilon(1e-9));

  std::vector<double> one = {5.0};
  auto single = t_ci95(one);
  CHECK_FALSE(single.defined);
  CHECK(single.mean == doctest::Approx(5.0));
}

TEST_CASE("ks accepts true uniform and rejects shifted data") {
  mfgsim::Rng r(99);
  std::vector<std::int64_t> good, bad;
  for (int i = 0; i < 5000; ++i) {
    good.push_back(r.uniform_int(10, 50));
    bad.push_back(r.uniform_int(10, 30));  // wrong support
  }
  CHECK(ks_uniform_int(good, 10, 50).pass);
  CHECK_FALSE(ks_uniform_int(bad, 10, 50).pass);
}
