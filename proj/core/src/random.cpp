#include "otfs/random.hpp"

#include <cmath>

namespace otfs {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng Rng::derive(std::uint64_t master_seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ splitmix64(a + 0x1234567ULL));
  s = splitmix64(s ^ splitmix64(b + 0x89ABCDEFULL));
  return Rng(s);
}

double Rng::normal() { return normal_(engine_); }

Complex Rng::complex_normal(double variance) {
  const double scale = std::sqrt(variance / 2.0);
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return {scale * re, scale * im};
}

CMatrix Rng::complex_normal(Index rows, Index cols, double variance) {
  CMatrix out(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) out(r, c) = complex_normal(variance);
  }
  return out;
}

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

Index Rng::uniform_index(Index n) {
  return static_cast<Index>(
      std::uniform_int_distribution<long long>(0, static_cast<long long>(n) - 1)(engine_));
}

}  // namespace otfs
