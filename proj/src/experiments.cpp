#include "odfset/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "odfset/contour.hpp"
#include "odfset/edt.hpp"
#include "odfset/errors.hpp"
#include "odfset/rng.hpp"

namespace odfset {
namespace {

// Angle of a boundary line through the origin fitted to contour vertices:
// the field is x1 sin(t) - x2 cos(t), so the line normal is (sin t, -cos t).
// Fit = smallest-eigenvalue direction of the raw second-moment matrix.
double fitted_line_angle(const std::vector<Polyline>& contours) {
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  std::size_t n = 0;
  for (const Polyline& line : contours) {
    for (const Vec2& v : line.points) {
      sxx += v.x * v.x;
      sxy += v.x * v.y;
      syy += v.y * v.y;
      ++n;
    }
  }
  if (n < 2) throw EmptyBoundaryError("fitted_line_angle: too few vertices");
  const double tr = sxx + syy;
  const double disc = std::sqrt((sxx - syy) * (sxx - syy) + 4.0 * sxy * sxy);
  const double lmin = 0.5 * (tr - disc);
  // Normal direction: the eigenvector with the better-conditioned expression.
  Vec2 nvec{sxy, lmin - sxx};
  const Vec2 alt{lmin - syy, sxy};
  if (norm(alt) > norm(nvec)) nvec = alt;
  if (nvec.y > 0.0) nvec = -1.0 * nvec;  // keep cos(t) >= 0
  return std::atan2(nvec.x, -nvec.y);
}

std::vector<double> summary_row(double m, std::vector<double> stats) {
  std::vector<double> abs_stats(stats.size());
  for (std::size_t k = 0; k < stats.size(); ++k) abs_stats[k] = std::abs(stats[k]);
  return {m, sample_quantile(stats, 0.5), sample_quantile(stats, 0.25),
          sample_quantile(stats, 0.75), sample_quantile(abs_stats, 0.5)};
}

}  // namespace

void write_experiment(const ExperimentReport& report,
                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "config.json", std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / "config.json").string());
    out << report.config_json;
  }
  write_csv_table(report.columns, report.rows, dir / "report.csv");
}

double sample_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw BadConfigError("sample_quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

ExperimentReport radius_ratio_experiment(const UniformLaw& law,
                                         const std::vector<std::size_t>& m_values,
                                         std::size_t reps, std::uint64_t seed) {
  if (reps < 1) throw BadConfigError("radius_ratio_experiment: reps must be >= 1");
  const double a = law.a.at(0), b = law.b.at(0);
  // a == b is allowed as a degenerate (point-mass) law.
  if (!(a <= b)) throw BadConfigError("radius_ratio_experiment: requires a <= b");
  const double mean_radius = 0.5 * (a + b);
  if (!(mean_radius > 0.0)) {
    throw BadConfigError("radius_ratio_experiment: mean radius must be positive");
  }
  const CounterRng rng(seed);

  ExperimentReport report;
  report.name = "radius_ratio";
  report.columns = {"m", "median", "q25", "q75", "median_abs_err"};
  for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
    const std::size_t m = m_values[mi];
    std::vector<double> ratios(reps);
    for (std::size_t t = 0; t < reps; ++t) {
      const CounterRng rep_rng = rng.child(mi, t);
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) acc += rep_rng.uniform(0, i, a, b);
      ratios[t] = (acc / static_cast<double>(m)) / mean_radius;
    }
    std::vector<double> errs(reps);
    for (std::size_t t = 0; t < reps; ++t) errs[t] = ratios[t] - 1.0;
    auto row = summary_row(static_cast<double>(m), std::move(errs));
    // Report the ratio itself; the abs column keeps the deviation from 1.
    row[1] += 1.0;
    row[2] += 1.0;
    row[3] += 1.0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

ExperimentReport angle_diff_experiment(const UniformLaw& law,
                                       const std::vector<std::size_t>& m_values,
                                       std::size_t reps, std::uint64_t seed) {
  if (reps < 1) throw BadConfigError("angle_diff_experiment: reps must be >= 1");
  const double a = law.a.at(0), b = law.b.at(0);
  // a == b is allowed as a degenerate (point-mass) law.
  if (!(a <= b)) throw BadConfigError("angle_diff_experiment: requires a <= b");
  const double mid = 0.5 * (a + b);
  const CounterRng rng(seed);
  const GridSpec grid({-1.0, -1.0}, 2.0 / 64.0, 64, 64);

  ExperimentReport report;
  report.name = "angle_diff";
  report.columns = {"m", "median", "q25", "q75", "median_abs"};
  for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
    const std::size_t m = m_values[mi];
    std::vector<double> diffs(reps);
    for (std::size_t t = 0; t < reps; ++t) {
      const CounterRng rep_rng = rng.child(mi, t);
      // Mean of the separable coefficients g(theta) = (sin, cos).
      double ms = 0.0, mc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double theta = rep_rng.uniform(0, i, a, b);
        ms += std::sin(theta);
        mc += std::cos(theta);
      }
      ms /= static_cast<double>(m);
      mc /= static_cast<double>(m);
      std::vector<double> values(grid.size());
      for (int i = 0; i < grid.rows(); ++i) {
        for (int j = 0; j < grid.cols(); ++j) {
          const Vec2 x = grid.cell_center(i, j);
          values[static_cast<std::size_t>(i) * grid.cols() + j] =
              x.x * ms - x.y * mc;
        }
      }
      const auto contours = zero_isocontour(ScalarField(grid, std::move(values)), 1e-12);
      diffs[t] = fitted_line_angle(contours) - mid;
    }
    report.rows.push_back(summary_row(static_cast<double>(m), std::move(diffs)));
  }
  return report;
}

FlashingDiscResult flashing_disc_contours(double p, double r,
                                          const std::vector<double>& a_values,
                                          const std::vector<double>& levels,
                                          const GridSpec& grid) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw BadConfigError("flashing_disc_contours: p must be in [0, 1]");
  }
  if (!(r > 0.0)) throw BadConfigError("flashing_disc_contours: r must be positive");
  FlashingDiscResult out;
  out.report.name = "flashing_discs";
  out.report.columns = {"a", "level", "vertex_count", "max_identity_dev"};
  for (std::size_t ai = 0; ai < a_values.size(); ++ai) {
    const Vec2 a{a_values[ai], 0.0};
    std::vector<double> values(grid.size());
    for (int i = 0; i < grid.rows(); ++i) {
      for (int j = 0; j < grid.cols(); ++j) {
        const Vec2 x = grid.cell_center(i, j);
        values[static_cast<std::size_t>(i) * grid.cols() + j] =
            p * norm(x) + (1.0 - p) * dist(x, a) - r;
      }
    }
    const ScalarField field(grid, std::move(values));
    out.fields.emplace_back("field_" + std::to_string(ai) + ".csv", field);
    for (std::size_t li = 0; li < levels.size(); ++li) {
      ScalarField shifted = field;
      for (double& v : shifted.values()) v -= levels[li];
      const auto contours = zero_isocontour(shifted, 1e-9);
      double worst = 0.0;
      std::size_t vertices = 0;
      for (const Polyline& line : contours) {
        for (const Vec2& v : line.points) {
          worst = std::max(worst, std::abs(p * norm(v) + (1.0 - p) * dist(v, a) -
                                           r - levels[li]));
          ++vertices;
        }
      }
      out.report.rows.push_back({a_values[ai], levels[li],
                                 static_cast<double>(vertices), worst});
      out.contours.emplace_back(
          "contour_" + std::to_string(ai) + "_" + std::to_string(li) + ".csv",
          contours);
    }
  }
  return out;
}

std::vector<BinaryMask> noisy_realizations(const BinaryMask& truth,
                                           double flip_prob, std::size_t m,
                                           std::uint64_t seed) {
  if (!(flip_prob >= 0.0 && flip_prob < 0.5)) {
    throw BadConfigError("noisy_realizations: flip_prob must be in [0, 0.5)");
  }
  const CounterRng rng(seed);
  std::vector<BinaryMask> out;
  out.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::uint8_t> bits = truth.bits();
    for (std::size_t c = 0; c < bits.size(); ++c) {
      if (rng.uniform(k, c) < flip_prob) bits[c] = bits[c] ? 0 : 1;
    }
    out.emplace_back(truth.grid(), std::move(bits));
  }
  return out;
}

std::vector<EstimatorOutcome> image_averaging_pipeline(
    const BinaryMask& truth, const std::vector<BinaryMask>& realizations,
    const std::vector<Estimator>& estimators, double q_norm) {
  if (realizations.empty()) {
    throw GridMismatchError("image_averaging_pipeline: no realizations");
  }
  for (const auto& r : realizations) {
    require_same_grid(truth.grid(), r.grid(), "image_averaging_pipeline");
  }
  const bool needs_fields =
      std::any_of(estimators.begin(), estimators.end(),
                  [](Estimator e) { return e != Estimator::Vorobev; });
  std::vector<ScalarField> fields;
  if (needs_fields) {
    fields.reserve(realizations.size());
    for (const auto& r : realizations) fields.push_back(oriented_distance_field(r));
  }

  std::vector<EstimatorOutcome> out;
  for (Estimator est : estimators) {
    SetEstimate estimate = [&] {
      switch (est) {
        case Estimator::Vorobev:
          return vorobev_expectation(realizations);
        case Estimator::DistanceAverage:
          return distance_average_expectation(fields, q_norm);
        case Estimator::Odf: {
          SetEstimate e = empirical_mean_set(fields);
          e.estimator = Estimator::Odf;
          return e;
        }
        case Estimator::Empirical:
          return empirical_mean_set(fields);
      }
      throw BadConfigError("image_averaging_pipeline: unknown estimator");
    }();

    GrayImage residual{truth.grid(), std::vector<std::uint8_t>(truth.grid().size())};
    for (std::size_t c = 0; c < residual.pixels.size(); ++c) {
      const bool in_est = estimate.mask.bits()[c] != 0;
      const bool in_truth = truth.bits()[c] != 0;
      residual.pixels[c] = in_est == in_truth ? 255 : (in_est ? 0 : 128);
    }
    MetricReport report = compare_masks(estimate.mask, truth, q_norm);
    out.push_back({est, std::move(estimate), report, std::move(residual)});
  }
  return out;
}

}  // namespace odfset
