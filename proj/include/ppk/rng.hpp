#pragma once

#include <cstdint>
#include <vector>

namespace ppk {

// Counter-based RNG (splitmix64 over a keyed counter): splittable, and the
// i-th draw depends only on (seed, stream, i), which keeps reports
// byte-identical across runs with the same seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)))) {}

  Rng split(std::uint64_t stream) const { return Rng(key_, stream + 1); }

  std::uint64_t next_u64() { return mix(key_ + ++counter_ * 0xbf58476d1ce4e5b9ULL); }

  // uniform in [0,1)
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double normal();  // Box-Muller, deterministic draw order

  std::vector<double> normal_vector(std::size_t n);
  std::vector<double> unit_vector(std::size_t n);  // normal, scaled to norm 1

 private:
  static std::uint64_t mix(std::uint64_t z);
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ppk
