#pragma once

#include <vector>

#include "odfset/grid.hpp"

namespace odfset {

/// Zero-level contours of a field sampled at cell centers.
///
/// Marching squares with linear interpolation along the edges of the dual
/// lattice spanned by cell centers. Nodes with |value| <= tolerance count as
/// exact zeros: connected regions of such nodes are plateaus (the zero level
/// has positive measure there) and are reported as closed boundary loops
/// around the union of their cell areas, not as line contours.
///
/// Returns an empty list when the field has constant sign.
std::vector<Polyline> zero_isocontour(const ScalarField& field,
                                      double tolerance = 1e-9);

/// Bilinear interpolation of the field at a domain point; the point is
/// clamped to the hull of cell centers.
double interpolate_field(const ScalarField& field, Vec2 p);

}  // namespace odfset
