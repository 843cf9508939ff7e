#include "mfgsim/exp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mfgsim::stats {

namespace {

double log_choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -HUGE_VAL;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

double fishers_exact(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  if (a < 0 || b < 0 || c < 0 || d < 0) throw std::invalid_argument("negative cell");
  const std::int64_t row1 = a + b;
  const std::int64_t col1 = a + c;
  const std::int64_t n = a + b + c + d;
  if (n == 0) return 1.0;

  const double log_denom = log_choose(n, col1);
  auto log_p = [&](std::int64_t k) {
    return log_choose(row1, k) + log_choose(n - row1, col1 - k) - log_denom;
  };

  const std::int64_t k_lo = std::max<std::int64_t>(0, col1 - (n - row1));
  const std::int64_t k_hi = std::min(row1, col1);
  const double log_obs = log_p(a);

  // p(k) <= p_obs * (1 + 1e-7), compared in log space.
  const double tie_slack = std::log1p(1e-7);
  double total = 0.0;
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    const double lp = log_p(k);
    if (lp <= log_obs + tie_slack) total += std::exp(lp);
  }
  return std::min(total, 1.0);
}

Interval wilson_ci(std::int64_t k, std::int64_t n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double p = static_cast<double>(k) / static_cast<double>(n);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double cohens_h(double p1, double p2) {
  auto phi = [](double p) { return 2.0 * std::asin(std::sqrt(p)); };
  return phi(p1) - phi(p2);
}

double t_quantile_975(int df) {
  static const double table[] = {
      12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
      2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
      2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) return table[0];
  if (df <= 30) return table[df - 1];
  return 1.96;
}

MeanCi t_ci95(std::span<const double> xs) {
  MeanCi r;
  r.n = static_cast<int>(xs.size());
  if (r.n == 0) return r;
  double sum = 0.0;
  for (double x : xs) sum += x;
  r.mean = sum / r.n;
  if (r.n < 2) {
    r.lo = r.hi = r.mean;
    return r;  // insufficient n: CI undefined
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.sd = std::sqrt(ss / (r.n - 1));
  const double half = t_quantile_975(r.n - 1) * r.sd / std::sqrt(r.n);
  r.lo = r.mean - half;
  r.hi = r.mean + half;
  r.defined = true;
  return r;
}

KsResult ks_uniform_int(std::span<const std::int64_t> sample, std::int64_t lo,
                        std::int64_t hi, double alpha) {
  KsResult r;
  const std::size_t n = sample.size();
  if (n == 0 || hi < lo) return r;

  // Both CDFs are step functions jumping only at lattice points, so the
  // supremum is attained at a support value; evaluate |F_n(v) - F(v)| there.
  const std::int64_t span = hi - lo + 1;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(span), 0);
  std::int64_t below = 0, above = 0;
  for (std::int64_t x : sample) {
    if (x < lo)
      ++below;
    else if (x > hi)
      ++above;
    else
      ++counts[static_cast<std::size_t>(x - lo)];
  }

  double d = static_cast<double>(below) / n;  // F_n(lo - 1) vs F = 0
  std::int64_t cum = below;
  for (std::int64_t v = 0; v < span; ++v) {
    cum += counts[static_cast<std::size_t>(v)];
    const double emp = static_cast<double>(cum) / n;
    const double theo = static_cast<double>(v + 1) / static_cast<double>(span);
    d = std::max(d, std::fabs(emp - theo));
  }
  if (above > 0) d = std::max(d, static_cast<double>(above) / n);
  r.d = d;

  // Asymptotic critical values; only these alphas are used here.
  double c;
  if (alpha <= 0.01)
    c = 1.628;
  else if (alpha <= 0.05)
    c = 1.358;
  else
    c = 1.224;
  r.critical = c / std::sqrt(static_cast<double>(n));
  r.pass = r.d < r.critical;
  return r;
}

}  // namespace mfgsim::stats
