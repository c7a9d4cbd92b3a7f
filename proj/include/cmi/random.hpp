#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace cmi {

// Reproducible random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; the derived draws below are written
// out by hand because <random> distributions are implementation-defined.
//
//   uniform_index(n): rejection sampling on engine() against the largest
//                     multiple of n below 2^64, then value % n.
//   uniform01():      (engine() >> 11) * 2^-53.
//   normal():         Box-Muller on two uniform01() draws, cosine branch.
//   shuffle():        Fisher-Yates from the back using uniform_index(i + 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::size_t uniform_index(std::size_t n);
  double uniform01();
  double normal(double mean = 0.0, double stddev = 1.0);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to derive independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace cmi
