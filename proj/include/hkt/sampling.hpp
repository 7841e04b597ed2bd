#pragma once

// Seeded samplers. Every sampler owns its generator; equal seeds give equal output.

#include <cstdint>
#include <random>

#include "hkt/irrational.hpp"
#include "hkt/period.hpp"

namespace hkt {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::int64_t integer(std::int64_t lo, std::int64_t hi);  // inclusive
  Vec normal_vector(std::size_t n);
  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0;
};

PeriodPoint sample_period_point(const PeriodDomain& dom, std::uint64_t seed);

/// Positive line orthogonal to Pi_z such that span(a, b, line) passes
/// is_fully_irrational at `search`. Errors when the negative part is empty.
Vec sample_irrational_line(const PeriodDomain& dom, const PeriodPoint& z, const RelationSearch& search,
                           std::uint64_t seed, int max_attempts = 32);

}  // namespace hkt
