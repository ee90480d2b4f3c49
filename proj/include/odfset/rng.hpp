#pragma once

#include <cstdint>

namespace odfset {

/// Counter-based uniform stream: draw (stream, index) is a pure function of
/// (seed, stream, index), so samples are reproducible independent of the
/// order or parallelism of evaluation.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Raw 64 mixed bits for a (stream, index) pair.
  std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const {
    std::uint64_t z = seed_;
    z = mix(z ^ mix(stream + 0x9e3779b97f4a7c15ULL));
    z = mix(z ^ mix(index + 0xbf58476d1ce4e5b9ULL));
    return mix(z);
  }

  /// Uniform double in [0, 1).
  double uniform(std::uint64_t stream, std::uint64_t index) const {
    return static_cast<double>(bits(stream, index) >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [a, b).
  double uniform(std::uint64_t stream, std::uint64_t index, double a,
                 double b) const {
    return a + (b - a) * uniform(stream, index);
  }

  /// Derive an independent child generator, e.g. one per replicate.
  CounterRng child(std::uint64_t stream, std::uint64_t index) const {
    return CounterRng(bits(stream, index));
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace odfset
