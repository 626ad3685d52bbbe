#pragma once

#include <cstdint>
#include <random>

#include "otfs/types.hpp"

namespace otfs {

// Seeded generator with the complex-Gaussian helpers the simulation needs.
// Copyable: a copy replays the exact same stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Counter-based stream derivation: the result depends only on the inputs,
  // never on how many streams were derived before.
  static Rng derive(std::uint64_t master_seed, std::uint64_t a, std::uint64_t b = 0);

  // Circularly-symmetric CN(0, variance).
  Complex complex_normal(double variance = 1.0);
  CMatrix complex_normal(Index rows, Index cols, double variance = 1.0);

  double normal();
  double uniform(double lo = 0.0, double hi = 1.0);
  // Uniform integer in [0, n).
  Index uniform_index(Index n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace otfs
