#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "twistlab/linalg.hpp"

namespace twistlab {

/// splitmix64 finalizer; decorrelates (seed, index) pairs so that each
/// verification sample owns an independent stream.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  /// Standard complex normal: E|z|^2 = 1.
  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return Complex{re, im} / std::sqrt(2.0);
  }

  CMatrix complex_normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    CMatrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = complex_normal();
    return out;
  }

  CVector complex_normal_vector(Eigen::Index size) { return complex_normal_matrix(size, 1); }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace twistlab
