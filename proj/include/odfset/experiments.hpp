#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "odfset/expectations.hpp"
#include "odfset/io.hpp"
#include "odfset/metrics.hpp"
#include "odfset/shapes.hpp"

namespace odfset {

/// Tabular Monte Carlo results; rows are plain doubles under named columns.
/// config_json echoes the run configuration verbatim for the output directory.
struct ExperimentReport {
  std::string name;
  std::string config_json;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Writes dir/config.json and dir/report.csv; byte-deterministic.
void write_experiment(const ExperimentReport& report,
                      const std::filesystem::path& dir);

/// Linear-interpolation quantile of a sample (p in [0, 1]).
double sample_quantile(std::vector<double> values, double p);

/// Discs with Uniform(a, b) radii: for each m, reps replicates of the ratio
/// sample-mean-radius / expected radius (the sample mean set of discs is the
/// disc of the mean radius, so the ratio is exactly the radius statistic).
/// Columns: m, median, q25, q75.
ExperimentReport radius_ratio_experiment(const UniformLaw& law,
                                         const std::vector<std::size_t>& m_values,
                                         std::size_t reps, std::uint64_t seed);

/// Half-planes through the origin with Uniform(a, b) boundary angle: for each
/// m, reps replicates of (angle of the sample mean set boundary) - (a+b)/2.
/// The angle is recovered by rasterizing the mean field, extracting the zero
/// isocontour and fitting a line through the origin to its vertices.
/// Columns: m, median, q25, q75, median_abs.
ExperimentReport angle_diff_experiment(const UniformLaw& law,
                                       const std::vector<std::size_t>& m_values,
                                       std::size_t reps, std::uint64_t seed);

/// Expected-ODF fields p|x| + (1-p)|x - a| - r for a = (a_value, 0), plus
/// their level isocontours. Report columns: a, level, vertex_count,
/// max_identity_dev (worst vertex deviation from the weighted two-focus
/// distance identity). Artifact names pair each field/contour with its report
/// row.
struct FlashingDiscResult {
  ExperimentReport report;
  std::vector<std::pair<std::string, ScalarField>> fields;
  std::vector<std::pair<std::string, std::vector<Polyline>>> contours;
};
FlashingDiscResult flashing_disc_contours(double p, double r,
                                          const std::vector<double>& a_values,
                                          const std::vector<double>& levels,
                                          const GridSpec& grid);

/// m independent copies of truth with each cell flipped with probability
/// flip_prob; draw (k, cell) is a pure function of (seed, k, cell).
std::vector<BinaryMask> noisy_realizations(const BinaryMask& truth,
                                           double flip_prob, std::size_t m,
                                           std::uint64_t seed);

struct EstimatorOutcome {
  Estimator estimator;
  SetEstimate estimate;
  MetricReport report;          // estimate scored against truth
  GrayImage residual;           // 0: estimate minus truth; 128: truth minus
                                // estimate; 255: agreement
};

/// Runs each requested estimator on the realizations and scores it against
/// truth. Odf/Empirical average the realizations' oriented distance fields;
/// Vorobev works on the masks; DistanceAverage minimizes the L^q_norm loss.
std::vector<EstimatorOutcome> image_averaging_pipeline(
    const BinaryMask& truth, const std::vector<BinaryMask>& realizations,
    const std::vector<Estimator>& estimators, double q_norm);

}  // namespace odfset
