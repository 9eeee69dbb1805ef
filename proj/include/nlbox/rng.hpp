#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nlbox/common.hpp"

namespace nlbox {

/// Party-local randomness. Wraps std::mt19937_64; the bounded draws are
/// implemented here rather than through <random> distributions so that
/// results are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next() { return engine_(); }

  Bit bit() { return static_cast<Bit>(engine_() >> 63); }

  BitString bits(std::size_t count);

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniformly random `count`-element subset of `pool`, in sampled order.
  std::vector<std::size_t> sample(std::vector<std::size_t> pool,
                                  std::size_t count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace nlbox
