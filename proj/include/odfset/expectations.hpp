#pragma once

#include <optional>
#include <string>
#include <vector>

#include "odfset/contour.hpp"
#include "odfset/edt.hpp"
#include "odfset/grid.hpp"

namespace odfset {

enum class Estimator { Odf, Vorobev, DistanceAverage, Empirical };

std::string estimator_name(Estimator e);
Estimator estimator_from_name(const std::string& name);

/// Set-valued estimate: the mask, the extracted boundary, and the scalar
/// field the level set was cut from. For Odf / DistanceAverage / Empirical
/// the mask is the sublevel of source_field at threshold_used; for Vorobev
/// the source field is (threshold - coverage) so the same sublevel convention
/// applies.
struct SetEstimate {
  BinaryMask mask;
  std::vector<Polyline> boundary;
  ScalarField source_field;
  Estimator estimator = Estimator::Odf;
  double threshold_used = 0.0;
};

/// Pointwise P(x in A) estimates live in ScalarFields with values in [0, 1].
using CoverageField = ScalarField;

struct ExpectationOptions {
  /// Warn (via warning_sink) when an input field violates the discrete
  /// Lipschitz-1 bound by more than lipschitz_slack; quantized round-trips
  /// can perturb values, so this is not an error.
  bool lipschitz_check = true;
  double lipschitz_slack = 1e-6;
  double contour_tolerance = 1e-9;
  void (*warning_sink)(const std::string&) = nullptr;
};

/// Zero sublevel set and zero isocontour of the weighted mean field.
SetEstimate odf_expectation(const std::vector<ScalarField>& fields,
                            const std::vector<double>& weights,
                            const ExpectationOptions& opts = {});

/// odf_expectation with uniform weights; tagged Empirical.
SetEstimate empirical_mean_set(const std::vector<ScalarField>& fields,
                               const ExpectationOptions& opts = {});

/// Pointwise fraction of masks containing each cell; values in [0, 1].
ScalarField coverage(const std::vector<BinaryMask>& masks);

/// Excursion set of the coverage function whose measure best realizes the
/// mean realization measure. Candidate levels are the attained coverage
/// values; the level whose superlevel measure is closest to the target is
/// chosen, preferring the higher level (smaller set) on exact ties.
SetEstimate vorobev_expectation(const std::vector<BinaryMask>& masks,
                                const ExpectationOptions& opts = {});

/// Level set of the mean field minimizing the L^q distance between the mean
/// field and the true ODF of the candidate level set, over the window.
/// Candidate thresholds are the attained mean-field values plus 0; degenerate
/// candidates (all-true / all-false) are skipped; ties break to the smaller
/// threshold.
SetEstimate distance_average_expectation(const std::vector<ScalarField>& fields,
                                         double q_norm,
                                         std::optional<Window> window = {},
                                         const ExpectationOptions& opts = {});

/// Zero isocontour of (source_field - threshold_used) with plateau detection:
/// regions with |field - threshold| <= tolerance come back as filled boundary
/// loops, covering expectations whose boundary has positive measure.
std::vector<Polyline> expected_boundary(const SetEstimate& estimate,
                                        double tolerance);

}  // namespace odfset
