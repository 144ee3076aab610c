#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "spinnet/rep/group_element.hpp"

namespace spinnet {

/// Counter-based random stream. The n-th draw of stream (seed, stream_id) is a
/// pure function of (seed, stream_id, n), so chunks of a Monte Carlo run can be
/// generated in any order and still reproduce the same values.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream_id = 0)
      : key_(mix(seed ^ mix(stream_id + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t next_u64() { return mix(key_ + (counter_++) * 0x9E3779B97F4A7C15ULL); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // Box-Muller with u1 in (0, 1].
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Haar-distributed SU(2) element: a normalized 4d Gaussian is uniform on S^3.
inline GroupElement haar_sample(CounterRng& rng) {
  for (;;) {
    GroupElement q{rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    double n2 = q.norm2();
    if (n2 > 1e-300) return q.normalized();
  }
}

}  // namespace spinnet
