#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ccsub/chart.hpp"

namespace ccsub {

inline constexpr std::uint64_t kDefaultSeed = 42;

/**
 * Deterministic sample points strictly inside a box. The first point is the
 * box center; the rest are uniform draws from a 64-bit Mersenne twister
 * (whose output sequence is fixed by the standard), mapped to (0, 1) by hand
 * so results do not depend on the library's distribution implementation.
 */
inline std::vector<std::vector<double>> sample_points(const Box& box, int n, std::uint64_t seed = kDefaultSeed) {
  std::vector<std::vector<double>> pts;
  if (n < 1) return pts;
  pts.reserve(static_cast<size_t>(n));
  pts.push_back(box.center());
  std::mt19937_64 rng(seed);
  for (int k = 1; k < n; ++k) {
    std::vector<double> p(static_cast<size_t>(box.dim()));
    for (int i = 0; i < box.dim(); ++i) {
      const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
      p[i] = box.lo[i] + u * (box.hi[i] - box.lo[i]);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace ccsub
