#include "odfset/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace odfset {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }
double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

GridSpec::GridSpec(Vec2 origin, double spacing, int rows, int cols)
    : origin_(origin), spacing_(spacing), rows_(rows), cols_(cols) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw std::invalid_argument("GridSpec: spacing must be positive and finite");
  }
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("GridSpec: dims must be at least 1x1");
  }
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) {
    throw std::invalid_argument("GridSpec: origin must be finite");
  }
}

bool GridSpec::operator==(const GridSpec& o) const {
  return origin_.x == o.origin_.x && origin_.y == o.origin_.y &&
         spacing_ == o.spacing_ && rows_ == o.rows_ && cols_ == o.cols_;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (a != b) {
    throw GridMismatchError(std::string(where) + ": grids differ");
  }
}

BinaryMask::BinaryMask(GridSpec grid, bool fill)
    : grid_(grid), bits_(grid.size(), fill ? 1 : 0) {}

BinaryMask::BinaryMask(GridSpec grid, std::vector<std::uint8_t> bits)
    : grid_(grid), bits_(std::move(bits)) {
  if (bits_.size() != grid_.size()) {
    throw std::invalid_argument("BinaryMask: bits shape must equal grid dims");
  }
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(
      std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double BinaryMask::measure() const {
  return static_cast<double>(count()) * grid_.cell_area();
}

bool BinaryMask::operator==(const BinaryMask& o) const {
  return grid_ == o.grid_ && bits_ == o.bits_;
}

BinaryMask complement(const BinaryMask& mask) {
  std::vector<std::uint8_t> bits(mask.bits().size());
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = mask.bits()[k] ? 0 : 1;
  return BinaryMask(mask.grid(), std::move(bits));
}

ScalarField::ScalarField(GridSpec grid, double fill)
    : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("ScalarField: values shape must equal grid dims");
  }
  check_finite();
}

double ScalarField::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarField::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

void ScalarField::check_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("ScalarField: values must be finite");
    }
  }
}

Window full_window(const GridSpec& grid) {
  return {0, 0, grid.rows(), grid.cols()};
}

void require_window(const GridSpec& grid, const Window& w, const char* where) {
  if (w.i0 < 0 || w.j0 < 0 || w.rows < 1 || w.cols < 1 ||
      w.i0 + w.rows > grid.rows() || w.j0 + w.cols > grid.cols()) {
    throw BadConfigError(std::string(where) + ": window out of range");
  }
}

}  // namespace odfset
