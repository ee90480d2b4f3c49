#include "odfset/metrics.hpp"

#include <cmath>
#include <limits>

#include "odfset/contour.hpp"
#include "odfset/edt.hpp"
#include "odfset/errors.hpp"

namespace odfset {
namespace {

std::vector<Vec2> densify(const std::vector<Polyline>& lines, double step) {
  std::vector<Vec2> pts;
  for (const Polyline& line : lines) {
    const std::size_t n = line.points.size();
    if (n == 0) continue;
    const std::size_t segs = line.closed ? n : n - 1;
    for (std::size_t s = 0; s < segs; ++s) {
      const Vec2 a = line.points[s];
      const Vec2 b = line.points[(s + 1) % n];
      pts.push_back(a);
      const double len = dist(a, b);
      const int pieces = static_cast<int>(std::ceil(len / step));
      for (int k = 1; k < pieces; ++k) {
        const double t = static_cast<double>(k) / pieces;
        pts.push_back(a + t * (b - a));
      }
    }
    if (!line.closed) pts.push_back(line.points.back());
  }
  return pts;
}

double directed_hausdorff(const std::vector<Vec2>& from, const std::vector<Vec2>& to) {
  double worst = 0.0;
  for (const Vec2& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& q : to) best = std::min(best, dist(p, q));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double symmetric_difference(const BinaryMask& a, const BinaryMask& b) {
  require_same_grid(a.grid(), b.grid(), "symmetric_difference");
  std::size_t diff = 0;
  for (std::size_t k = 0; k < a.bits().size(); ++k) {
    diff += a.bits()[k] != b.bits()[k] ? 1 : 0;
  }
  return static_cast<double>(diff) * a.grid().cell_area();
}

double lq_char_distance(const BinaryMask& a, const BinaryMask& b, double q) {
  if (!(q >= 1.0)) throw BadConfigError("lq_char_distance: q must be >= 1");
  // |chi_a - chi_b|^q = |chi_a - chi_b|, so the integral is the sym. diff.
  return std::pow(symmetric_difference(a, b), 1.0 / q);
}

double l2_odf_distance(const ScalarField& a, const ScalarField& b,
                       std::optional<Window> window) {
  require_same_grid(a.grid(), b.grid(), "l2_odf_distance");
  const Window w = window.value_or(full_window(a.grid()));
  require_window(a.grid(), w, "l2_odf_distance");
  double acc = 0.0;
  for (int i = w.i0; i < w.i0 + w.rows; ++i) {
    for (int j = w.j0; j < w.j0 + w.cols; ++j) {
      const double d = a.at(i, j) - b.at(i, j);
      acc += d * d;
    }
  }
  return std::sqrt(acc * a.grid().cell_area());
}

double hausdorff_boundary(const std::vector<Polyline>& p,
                          const std::vector<Polyline>& q, double densify_step) {
  if (!(densify_step > 0.0)) {
    throw BadConfigError("hausdorff_boundary: densify_step must be positive");
  }
  const std::vector<Vec2> pp = densify(p, densify_step);
  const std::vector<Vec2> qq = densify(q, densify_step);
  if (pp.empty() || qq.empty()) {
    throw EmptyBoundaryError("hausdorff_boundary: empty boundary");
  }
  return std::max(directed_hausdorff(pp, qq), directed_hausdorff(qq, pp));
}

const std::vector<std::string>& metric_report_columns() {
  static const std::vector<std::string> cols = {
      "symmetric_difference_area", "lq_char_distance", "l2_odf_distance",
      "misclassification_fraction", "hausdorff_boundary"};
  return cols;
}

std::vector<double> metric_report_row(const MetricReport& r) {
  return {r.symmetric_difference_area, r.lq_char_distance, r.l2_odf_distance,
          r.misclassification_fraction, r.hausdorff_boundary};
}

MetricReport compare_masks(const BinaryMask& a, const BinaryMask& b, double q) {
  require_same_grid(a.grid(), b.grid(), "compare_masks");
  MetricReport r;
  r.symmetric_difference_area = symmetric_difference(a, b);
  r.lq_char_distance = lq_char_distance(a, b, q);
  const double total = static_cast<double>(a.grid().size()) * a.grid().cell_area();
  r.misclassification_fraction = r.symmetric_difference_area / total;
  const bool a_ok = a.any() && !a.all();
  const bool b_ok = b.any() && !b.all();
  if (a_ok && b_ok) {
    const ScalarField ba = oriented_distance_field(a);
    const ScalarField bb = oriented_distance_field(b);
    r.l2_odf_distance = l2_odf_distance(ba, bb);
    const auto ca = zero_isocontour(ba, 1e-9);
    const auto cb = zero_isocontour(bb, 1e-9);
    if (!ca.empty() && !cb.empty()) {
      r.hausdorff_boundary = hausdorff_boundary(ca, cb, 0.5 * a.grid().spacing());
    }
  }
  return r;
}

}  // namespace odfset
