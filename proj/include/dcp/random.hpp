#pragma once

#include <cstdint>
#include <random>

namespace dcp {

/// Seed-deterministic uniform stream. The engine is std::mt19937_64 (whose
/// output sequence is fixed by the standard) seeded through std::seed_seq
/// from (seed, stream); doubles are produced by an explicit 53-bit mapping
/// rather than a distribution object, so identical seeds give identical
/// values on every platform. Distinct stream ids give independent substreams.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1); never returns an endpoint.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, bound).
  std::uint64_t uniform_index(std::uint64_t bound) {
    return engine_() % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dcp
