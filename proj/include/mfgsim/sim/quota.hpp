#pragma once

#include <cstdint>

namespace mfgsim::sim {

// Spreads a fractional per-period rate into integer emissions with zero
// long-run drift: after n periods exactly floor(n * num / den) items have
// been emitted, and each emission is floor(rate) or ceil(rate). Pure integer
// arithmetic, so the sequence is identical on every platform.
class FractionalAccumulator {
 public:
  FractionalAccumulator(std::int64_t num, std::int64_t den);

  // Converts a decimal rate like 3.4 into its exact reduced rational (17/5).
  // Rates are expected to carry at most nine decimal places.
  static FractionalAccumulator from_rate(double per_period);

  std::int64_t next();

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  std::int64_t carry() const { return carry_; }

 private:
  std::int64_t num_;
  std::int64_t den_;
  std::int64_t carry_ = 0;
};

}  // namespace mfgsim::sim
