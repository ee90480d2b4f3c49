#pragma once

#include <cstdint>
#include <vector>

#include "odfset/errors.hpp"

namespace odfset {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
double norm(Vec2 v);
double dist(Vec2 a, Vec2 b);

/// Rasterized isotropic 2-D domain.
///
/// Cell (i, j) has its center at origin + spacing * (j + 0.5, i + 0.5):
/// i indexes rows (y), j indexes columns (x). This convention is fixed
/// throughout the library; sets live on cell centers, not cell areas.
class GridSpec {
 public:
  GridSpec(Vec2 origin, double spacing, int rows, int cols);

  Vec2 origin() const { return origin_; }
  double spacing() const { return spacing_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return static_cast<std::size_t>(rows_) * cols_; }

  Vec2 cell_center(int i, int j) const {
    return {origin_.x + spacing_ * (j + 0.5), origin_.y + spacing_ * (i + 0.5)};
  }

  /// Area of a single cell; Lebesgue measure of a mask is cell count times this.
  double cell_area() const { return spacing_ * spacing_; }

  bool operator==(const GridSpec& o) const;
  bool operator!=(const GridSpec& o) const { return !(*this == o); }

 private:
  Vec2 origin_;
  double spacing_;
  int rows_;
  int cols_;
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

/// Set membership on a grid: bit (i, j) true means cell center (i, j) is in the set.
class BinaryMask {
 public:
  explicit BinaryMask(GridSpec grid, bool fill = false);
  BinaryMask(GridSpec grid, std::vector<std::uint8_t> bits);

  const GridSpec& grid() const { return grid_; }
  bool at(int i, int j) const { return bits_[idx(i, j)] != 0; }
  void set(int i, int j, bool v) { bits_[idx(i, j)] = v ? 1 : 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::size_t count() const;
  /// Lebesgue measure: true-cell count times cell area.
  double measure() const;
  bool any() const { return count() > 0; }
  bool all() const { return count() == grid_.size(); }

  bool operator==(const BinaryMask& o) const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * grid_.cols() + j;
  }
  GridSpec grid_;
  std::vector<std::uint8_t> bits_;
};

BinaryMask complement(const BinaryMask& mask);

/// Real-valued field sampled at cell centers. All values must be finite.
class ScalarField {
 public:
  explicit ScalarField(GridSpec grid, double fill = 0.0);
  ScalarField(GridSpec grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  double at(int i, int j) const { return values_[idx(i, j)]; }
  double& at(int i, int j) { return values_[idx(i, j)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double min_value() const;
  double max_value() const;

  void check_finite() const;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * grid_.cols() + j;
  }
  GridSpec grid_;
  std::vector<double> values_;
};

/// Open or closed chain of points in domain units.
struct Polyline {
  std::vector<Vec2> points;
  bool closed = false;
};

/// Sub-rectangle of a grid, in cell indices (half-open extent).
struct Window {
  int i0 = 0;
  int j0 = 0;
  int rows = 0;
  int cols = 0;
};

Window full_window(const GridSpec& grid);
/// Throws BadConfigError when the window does not fit inside the grid.
void require_window(const GridSpec& grid, const Window& w, const char* where);

}  // namespace odfset
