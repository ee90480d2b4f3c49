#pragma once

#include <optional>
#include <string>
#include <vector>

#include "odfset/grid.hpp"

namespace odfset {

/// Lebesgue measure of the symmetric difference (XOR cell count times cell
/// area); equals the L^1 distance between the characteristic functions.
double symmetric_difference(const BinaryMask& a, const BinaryMask& b);

/// L^q distance between characteristic functions: (sym. diff. area)^(1/q),
/// since |chi_a - chi_b| only takes values 0 and 1.
double lq_char_distance(const BinaryMask& a, const BinaryMask& b, double q);

/// Discrete L^2 distance between fields over the window, cell-area weighted.
double l2_odf_distance(const ScalarField& a, const ScalarField& b,
                       std::optional<Window> window = {});

/// Symmetric Hausdorff distance between the two boundaries after densifying
/// every segment to steps no longer than densify_step.
double hausdorff_boundary(const std::vector<Polyline>& p,
                          const std::vector<Polyline>& q, double densify_step);

struct MetricReport {
  double symmetric_difference_area = 0.0;
  double lq_char_distance = 0.0;
  double l2_odf_distance = 0.0;
  double misclassification_fraction = 0.0;  // sym. diff. / total domain area
  double hausdorff_boundary = 0.0;
};

/// Column order of the CSV row form; shared by header and writer.
const std::vector<std::string>& metric_report_columns();
std::vector<double> metric_report_row(const MetricReport& r);

/// Full report between two masks: boundaries and ODF distance are computed
/// from the masks' oriented distance fields (degenerate masks leave
/// hausdorff_boundary at 0 when either boundary is empty).
MetricReport compare_masks(const BinaryMask& a, const BinaryMask& b, double q);

}  // namespace odfset
