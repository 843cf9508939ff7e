#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "mfgsim/exp/stats.hpp"
#include "mfgsim/util/rng.hpp"

using mfgsim::Rng;

TEST_CASE("same seed, same sequence") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("labeled streams are independent and reproducible") {
  Rng a = Rng::stream(42, "orders");
  Rng b = Rng::stream(42, "quality");
  Rng a2 = Rng::stream(42, "orders");
  CHECK(a.next_u64() != b.next_u64());
  Rng a3 = Rng::stream(42, "orders");
  CHECK(a3.next_u64() == a2.next_u64());
}

TEST_CASE("uniform_int stays in bounds and covers the range") {
  Rng r(7);
  std::vector<int> seen(10, 0);
  for (int i = 0; i < 20000; ++i) {
    auto v = r.uniform_int(3, 12);
    REQUIRE(v >= 3);
    REQUIRE(v <= 12);
    seen[v - 3]++;
  }
  for (int c : seen) CHECK(c > 1600);  // ~2000 expected per bucket
  CHECK(r.uniform_int(5, 5) == 5);
}

TEST_CASE("uniform_int passes KS against discrete uniform") {
  Rng r = Rng::stream(42, "durations");
  std::vector<std::int64_t> xs;
  xs.reserve(10000);
  for (int i = 0; i < 10000; ++i) xs.push_back(r.uniform_int(120, 480));
  auto ks = mfgsim::stats::ks_uniform_int(xs, 120, 480);
  CHECK(ks.pass);
}

TEST_CASE("exponential has the requested mean") {
  Rng r(11);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += r.exponential(250.0);
  double mean = sum / n;
  CHECK(std::fabs(mean - 250.0) < 3.0);  // se ~ 0.56
}

TEST_CASE("bernoulli frequency tracks p") {
  Rng r(13);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits += r.bernoulli(0.05) ? 1 : 0;
  double p = static_cast<double>(hits) / n;
  CHECK(p > 0.045);
  CHECK(p < 0.055);
}

TEST_CASE("uniform01 lies in [0,1)") {
  Rng r(3);
  for (int i = 0; i < 10000; ++i) {
    double u = r.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}
