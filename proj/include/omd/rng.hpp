#pragma once

#include <cstdint>
#include <random>

namespace omd {

/// Seeded scalar sampler with a fully pinned-down output sequence.
///
/// The engine is std::mt19937_64 (its sequence is specified by the C++
/// standard, so it is identical on every conforming implementation) and all
/// distribution transforms are explicit, ziggurat-free formulas:
///
///   uniform():      top 53 bits of one draw, scaled to [0, 1)
///   uniform_open(): (bits + 0.5) * 2^-53, strictly inside (0, 1)
///   normal():       Box-Muller cosine branch, consumes two draws
///   exponential():  -ln(1 - u), scale 1
///   gumbel(m, b):   m - b * ln(-ln(u))
///
/// Identical seeds therefore give identical samples on any platform.
class PortableSampler {
 public:
  explicit PortableSampler(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal();
  double exponential();
  double gumbel(double location, double scale);

 private:
  std::mt19937_64 engine_;
};

}  // namespace omd
