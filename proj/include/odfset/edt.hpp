#pragma once

#include <cstdint>
#include <vector>

#include "odfset/grid.hpp"

namespace odfset {

/// Exact squared Euclidean distances on the index lattice: result[k] is the
/// minimum over true cells of (di^2 + dj^2), as an integer. Separable
/// lower-envelope algorithm, O(N) per axis, exact in integer arithmetic.
/// Throws EmptySetError when the mask has no true cell.
std::vector<std::int64_t> squared_distance_transform(const BinaryMask& mask);

/// Exact Euclidean distance from every cell center to the nearest true cell
/// center, in domain units. Zero on true cells.
ScalarField distance_transform(const BinaryMask& mask);

/// Discrete oriented distance field of a mask. Negative inside, positive
/// outside, never exactly zero.
///
/// Cell-center convention: the raw difference d_A - d_{A^c} over center
/// coordinates jumps by 2*spacing across the interface, so each side is
/// pulled in by half a cell:
///   b = d_A - spacing/2        on false cells,
///   b = -(d_{A^c} - spacing/2) on true cells.
/// This places the discrete boundary midway between adjacent centers, makes
/// antisymmetry under complement exact, and keeps |b(p) - b(q)| <= |p - q|
/// for every cell pair. Throws DegenerateSetError when the mask is all-true
/// or all-false.
ScalarField oriented_distance_field(const BinaryMask& mask);

/// Pointwise convex combination of fields sharing one grid. Weights must be
/// nonnegative and sum to 1 (within 1e-12).
ScalarField weighted_mean_fields(const std::vector<ScalarField>& fields,
                                 const std::vector<double>& weights);

/// Uniform-weight mean.
ScalarField mean_fields(const std::vector<ScalarField>& fields);

/// Cells where the field is <= level.
BinaryMask sublevel_mask(const ScalarField& field, double level);

}  // namespace odfset
