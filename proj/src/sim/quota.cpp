#include "mfgsim/sim/quota.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mfgsim::sim {

FractionalAccumulator::FractionalAccumulator(std::int64_t num, std::int64_t den)
    : num_(num), den_(den) {
  if (den <= 0 || num < 0) throw std::invalid_argument("rate must be a non-negative rational");
  std::int64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

FractionalAccumulator FractionalAccumulator::from_rate(double per_period) {
  if (!(per_period >= 0.0) || per_period > 1e12) {
    throw std::invalid_argument("rate must be a non-negative finite number");
  }
  std::int64_t den = 1;
  for (int k = 0; k <= 9; ++k) {
    double scaled = per_period * static_cast<double>(den);
    double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) < 1e-6 * (1.0 + rounded)) {
      return FractionalAccumulator(static_cast<std::int64_t>(rounded), den);
    }
    den *= 10;
  }
  throw std::invalid_argument("rate has no short decimal form");
}

std::int64_t FractionalAccumulator::next() {
  carry_ += num_;
  std::int64_t k = carry_ / den_;
  carry_ -= k * den_;
  return k;
}

}  // namespace mfgsim::sim
