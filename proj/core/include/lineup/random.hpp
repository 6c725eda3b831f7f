#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>

namespace lineup {

// Seeded generator with platform-independent output.
//
// The raw engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The distributions on top of it are implemented here rather than
// taken from <random>, because std::uniform_int_distribution and
// std::normal_distribution are implementation-defined:
//
//   uniform()        53 high bits of one engine draw, scaled to [0, 1)
//   uniform_index()  rejection sampling on the largest multiple of the bound
//   normal()         Marsaglia polar method; the second variate of each
//                    accepted pair is cached and returned by the next call
//
// These rules are part of the reproducibility contract. Changing any of them
// changes every generated null dataset.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform();

  // Uniform integer in [0, bound). bound must be positive.
  std::size_t uniform_index(std::size_t bound);

  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

// Derives an independent stream seed from a base seed (splitmix64 finaliser
// applied to base ^ golden-ratio * (stream + 1)).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace lineup
