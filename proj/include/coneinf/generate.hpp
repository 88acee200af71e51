#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "coneinf/core.hpp"

namespace coneinf {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Standard normal sampler with a fixed, portable definition:
/// std::mt19937_64 (whose output sequence is pinned by the standard) plus
/// an explicit Box-Muller transform. std::normal_distribution is avoided
/// because its output is implementation-defined.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite; u2 in [0, 1).
    const double u1 =
        (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// m points in R^n with every coordinate (height included) i.i.d. standard
/// normal; identical output for identical (n, m, seed).
inline Instance generate_normal(int n, int m, std::uint64_t seed) {
  if (n < 2)
    throw SolverError(Errc::DimensionMismatch, "n must be >= 2");
  if (m < 1)
    throw SolverError(Errc::EmptyInstance, "m must be >= 1");
  NormalSampler normal(seed);
  Instance inst;
  inst.n = n;
  inst.points.reserve(m);
  for (int i = 0; i < m; ++i) {
    Point p(normal(), Vec(n - 1));
    for (int j = 0; j < n - 1; ++j) p.pbar[j] = normal();
    inst.points.push_back(std::move(p));
  }
  return inst;
}

}  // namespace coneinf
