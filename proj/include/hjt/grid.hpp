#pragma once

// Axis-aligned sample lattices and seeded random samples.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hjt/error.hpp"
#include "hjt/field.hpp"
#include "hjt/linalg.hpp"

namespace hjt {

struct Axis {
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 20;

  double at(std::size_t i) const {
    if (count == 1) return 0.5 * (min + max);
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
};

/// Lattice points in row-major order (last axis fastest), dropping those off the guard.
inline std::vector<Vec> lattice(const std::vector<Axis>& axes, const Guard& keep = {}) {
  std::vector<Vec> out;
  if (axes.empty()) return out;
  std::size_t total = 1;
  for (const auto& a : axes) {
    if (a.count == 0) throw Error(ErrorKind::EmptyGrid, "axis with zero points");
    total *= a.count;
  }
  const auto d = static_cast<Eigen::Index>(axes.size());
  std::vector<std::size_t> idx(axes.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    Vec p(d);
    for (Eigen::Index i = 0; i < d; ++i) p[i] = axes[static_cast<std::size_t>(i)].at(idx[static_cast<std::size_t>(i)]);
    if (!keep || keep(as_span(p))) out.push_back(p);
    for (std::size_t i = axes.size(); i-- > 0;) {
      if (++idx[i] < axes[i].count) break;
      idx[i] = 0;
    }
  }
  return out;
}

inline std::vector<Axis> square_grid(std::size_t dim, double lo, double hi, std::size_t count) {
  return std::vector<Axis>(dim, Axis{lo, hi, count});
}

/// Uniform samples in the box that satisfy `keep`; gives up after 1000 * count draws.
inline std::vector<Vec> random_points(const std::vector<Axis>& box, std::size_t count, std::uint64_t seed,
                                      const Guard& keep = {}) {
  std::mt19937_64 rng(seed);
  std::vector<Vec> out;
  const auto d = static_cast<Eigen::Index>(box.size());
  for (std::size_t tries = 0; out.size() < count && tries < 1000 * count + 1000; ++tries) {
    Vec p(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const auto& a = box[static_cast<std::size_t>(i)];
      p[i] = std::uniform_real_distribution<double>(a.min, a.max)(rng);
    }
    if (!keep || keep(as_span(p))) out.push_back(p);
  }
  if (out.size() < count) throw Error(ErrorKind::EmptyGrid, "guard rejects almost every random sample");
  return out;
}

}  // namespace hjt
