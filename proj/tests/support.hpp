// Shared oracles and generators for the test binaries.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "odfset/edt.hpp"
#include "odfset/grid.hpp"
#include "odfset/rng.hpp"

namespace testsup {

using namespace odfset;

/// O(N^2) all-pairs nearest-true-cell distance; final expression matches the
/// library's (spacing * sqrt of the integer squared distance), so agreement
/// must be bit-identical.
inline ScalarField brute_force_distance(const BinaryMask& mask) {
  const auto& g = mask.grid();
  std::vector<std::pair<int, int>> truths;
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      if (mask.at(i, j)) truths.emplace_back(i, j);
    }
  }
  std::vector<double> values(g.size());
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (const auto& [ti, tj] : truths) {
        const std::int64_t di = ti - i, dj = tj - j;
        best = std::min(best, di * di + dj * dj);
      }
      values[static_cast<std::size_t>(i) * g.cols() + j] =
          g.spacing() * std::sqrt(static_cast<double>(best));
    }
  }
  return ScalarField(g, std::move(values));
}

inline BinaryMask random_mask(const CounterRng& rng, std::uint64_t stream,
                              int rows, int cols, double density,
                              double spacing = 1.0) {
  BinaryMask mask(GridSpec({0.0, 0.0}, spacing, rows, cols));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      mask.set(i, j, rng.uniform(stream, static_cast<std::uint64_t>(i) * cols + j) <
                         density);
    }
  }
  return mask;
}

/// Axis-aligned ellipse parameters recovered from five boundary points by
/// solving the general conic through them and reducing to principal axes.
struct ConicFit {
  Vec2 center;
  double semi_major = 0.0;
  double semi_minor = 0.0;
};

inline ConicFit fit_conic(const std::array<Vec2, 5>& pts) {
  // Conic A x^2 + B xy + C y^2 + D x + E y + F = 0; fix F and solve 5x5.
  double m[5][6];
  for (int r = 0; r < 5; ++r) {
    const Vec2 p = pts[r];
    m[r][0] = p.x * p.x;
    m[r][1] = p.x * p.y;
    m[r][2] = p.y * p.y;
    m[r][3] = p.x;
    m[r][4] = p.y;
    m[r][5] = -1.0;  // F = 1
  }
  for (int c = 0; c < 5; ++c) {
    int piv = c;
    for (int r = c + 1; r < 5; ++r) {
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    }
    std::swap(m[c], m[piv]);
    for (int r = 0; r < 5; ++r) {
      if (r == c || m[c][c] == 0.0) continue;
      const double f = m[r][c] / m[c][c];
      for (int k = c; k < 6; ++k) m[r][k] -= f * m[c][k];
    }
  }
  const double A = m[0][5] / m[0][0], B = m[1][5] / m[1][1], C = m[2][5] / m[2][2];
  const double D = m[3][5] / m[3][3], E = m[4][5] / m[4][4], F = 1.0;
  // Center solves the gradient system; axes from the quadratic-part spectrum.
  const double det = 4.0 * A * C - B * B;
  ConicFit out;
  out.center = {(B * E - 2.0 * C * D) / det, (B * D - 2.0 * A * E) / det};
  const double Fc = A * out.center.x * out.center.x +
                    B * out.center.x * out.center.y +
                    C * out.center.y * out.center.y + D * out.center.x +
                    E * out.center.y + F;
  const double tr = A + C;
  const double disc = std::sqrt((A - C) * (A - C) + B * B);
  const double l1 = 0.5 * (tr - disc), l2 = 0.5 * (tr + disc);
  out.semi_major = std::sqrt(-Fc / l1);
  out.semi_minor = std::sqrt(-Fc / l2);
  if (out.semi_minor > out.semi_major) std::swap(out.semi_major, out.semi_minor);
  return out;
}

/// Largest |b(p) - b(q)| - |p - q| over all cell pairs (Lipschitz-1 excess).
inline double lipschitz_excess(const ScalarField& f) {
  const auto& g = f.grid();
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      for (int i2 = i; i2 < g.rows(); ++i2) {
        for (int j2 = i2 == i ? j + 1 : 0; j2 < g.cols(); ++j2) {
          const double d = g.spacing() * std::hypot(i2 - i, j2 - j);
          worst = std::max(worst, std::abs(f.at(i, j) - f.at(i2, j2)) - d);
        }
      }
    }
  }
  return worst;
}

inline std::size_t mask_diff_count(const BinaryMask& a, const BinaryMask& b) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < a.bits().size(); ++k) {
    n += a.bits()[k] != b.bits()[k] ? 1 : 0;
  }
  return n;
}

}  // namespace testsup
