#include "odfset/expectations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "odfset/errors.hpp"

namespace odfset {
namespace {

void warn(const ExpectationOptions& opts, const std::string& msg) {
  if (opts.warning_sink) opts.warning_sink(msg);
}

// Neighbor-pair screen for the discrete Lipschitz-1 bound.
void lipschitz_screen(const ScalarField& f, const ExpectationOptions& opts) {
  const auto& g = f.grid();
  const double h = g.spacing();
  const double diag = h * std::sqrt(2.0);
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      const double v = f.at(i, j);
      auto check = [&](int ii, int jj, double d) {
        if (ii < 0 || ii >= g.rows() || jj < 0 || jj >= g.cols()) return true;
        return std::abs(f.at(ii, jj) - v) <= d + opts.lipschitz_slack;
      };
      if (!check(i, j + 1, h) || !check(i + 1, j, h) || !check(i + 1, j + 1, diag) ||
          !check(i + 1, j - 1, diag)) {
        warn(opts, "input field violates the Lipschitz-1 bound near cell (" +
                       std::to_string(i) + ", " + std::to_string(j) + ")");
        return;
      }
    }
  }
}

SetEstimate level_estimate(ScalarField field, double threshold, Estimator tag,
                           const ExpectationOptions& opts) {
  ScalarField shifted = field;
  if (threshold != 0.0) {
    for (double& v : shifted.values()) v -= threshold;
  }
  SetEstimate est{sublevel_mask(field, threshold),
                  zero_isocontour(shifted, opts.contour_tolerance), std::move(field),
                  tag, threshold};
  return est;
}

}  // namespace

std::string estimator_name(Estimator e) {
  switch (e) {
    case Estimator::Odf: return "odf";
    case Estimator::Vorobev: return "vorobev";
    case Estimator::DistanceAverage: return "da";
    case Estimator::Empirical: return "empirical";
  }
  throw std::invalid_argument("estimator_name: unknown estimator");
}

Estimator estimator_from_name(const std::string& name) {
  if (name == "odf") return Estimator::Odf;
  if (name == "vorobev") return Estimator::Vorobev;
  if (name == "da") return Estimator::DistanceAverage;
  if (name == "empirical") return Estimator::Empirical;
  throw ParseError("unknown estimator: " + name);
}

SetEstimate odf_expectation(const std::vector<ScalarField>& fields,
                            const std::vector<double>& weights,
                            const ExpectationOptions& opts) {
  if (opts.lipschitz_check) {
    for (const auto& f : fields) lipschitz_screen(f, opts);
  }
  ScalarField mean = weighted_mean_fields(fields, weights);
  return level_estimate(std::move(mean), 0.0, Estimator::Odf, opts);
}

SetEstimate empirical_mean_set(const std::vector<ScalarField>& fields,
                               const ExpectationOptions& opts) {
  SetEstimate est = odf_expectation(
      fields, std::vector<double>(fields.size(),
                                  fields.empty() ? 0.0 : 1.0 / fields.size()),
      opts);
  est.estimator = Estimator::Empirical;
  return est;
}

ScalarField coverage(const std::vector<BinaryMask>& masks) {
  if (masks.empty()) throw GridMismatchError("coverage: no masks");
  const GridSpec& grid = masks.front().grid();
  for (const auto& m : masks) require_same_grid(grid, m.grid(), "coverage");
  std::vector<double> values(grid.size(), 0.0);
  for (const auto& m : masks) {
    for (std::size_t k = 0; k < values.size(); ++k) values[k] += m.bits()[k];
  }
  const double inv = 1.0 / static_cast<double>(masks.size());
  for (double& v : values) v *= inv;
  return ScalarField(grid, std::move(values));
}

SetEstimate vorobev_expectation(const std::vector<BinaryMask>& masks,
                                const ExpectationOptions& opts) {
  if (masks.empty()) throw GridMismatchError("vorobev_expectation: no masks");
  const GridSpec& grid = masks.front().grid();
  for (const auto& m : masks) require_same_grid(grid, m.grid(), "vorobev_expectation");
  const std::int64_t m = static_cast<std::int64_t>(masks.size());

  // Integer coverage counts keep level selection exact.
  std::vector<std::int64_t> cnt(grid.size(), 0);
  std::int64_t total_true = 0;
  for (const auto& mask : masks) {
    for (std::size_t k = 0; k < cnt.size(); ++k) cnt[k] += mask.bits()[k];
  }
  for (std::int64_t c : cnt) total_true += c;
  // Target measure in cells is total_true / m; comparisons are scaled by m.

  std::vector<std::int64_t> levels = cnt;
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // Superlevel measure is nondecreasing as the level drops. Pick the level
  // whose measure lands closest to the target; on an exact tie keep the
  // higher level, which realizes the union/intersection case split of
  // balanced two-mask inputs.
  std::int64_t best_level = levels.front();
  std::int64_t best_err = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t level : levels) {
    std::int64_t cells = 0;
    for (std::int64_t c : cnt) cells += (c >= level) ? 1 : 0;
    const std::int64_t err = std::abs(cells * m - total_true);
    if (err < best_err) {
      best_err = err;
      best_level = level;
    }
  }

  const double q = static_cast<double>(best_level) / static_cast<double>(m);
  std::vector<double> residual(grid.size());
  std::vector<std::uint8_t> bits(grid.size());
  for (std::size_t k = 0; k < cnt.size(); ++k) {
    bits[k] = cnt[k] >= best_level ? 1 : 0;
    residual[k] = q - static_cast<double>(cnt[k]) / static_cast<double>(m);
  }
  ScalarField source(grid, std::move(residual));
  SetEstimate est{BinaryMask(grid, std::move(bits)),
                  zero_isocontour(source, opts.contour_tolerance), std::move(source),
                  Estimator::Vorobev, q};
  return est;
}

SetEstimate distance_average_expectation(const std::vector<ScalarField>& fields,
                                         double q_norm,
                                         std::optional<Window> window,
                                         const ExpectationOptions& opts) {
  if (!(q_norm >= 1.0)) {
    throw BadConfigError("distance_average_expectation: q_norm must be >= 1");
  }
  if (opts.lipschitz_check) {
    for (const auto& f : fields) lipschitz_screen(f, opts);
  }
  ScalarField mean = mean_fields(fields);
  const GridSpec& grid = mean.grid();
  const Window w = window.value_or(full_window(grid));
  require_window(grid, w, "distance_average_expectation");

  std::vector<double> candidates;
  candidates.reserve(static_cast<std::size_t>(w.rows) * w.cols + 1);
  for (int i = w.i0; i < w.i0 + w.rows; ++i) {
    for (int j = w.j0; j < w.j0 + w.cols; ++j) candidates.push_back(mean.at(i, j));
  }
  candidates.push_back(0.0);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const double cell_area = grid.cell_area();
  double best_loss = std::numeric_limits<double>::infinity();
  double best_s = 0.0;
  bool found = false;
  for (double s : candidates) {
    BinaryMask level_set = sublevel_mask(mean, s);
    if (!level_set.any() || level_set.all()) continue;  // degenerate candidate
    const ScalarField b = oriented_distance_field(level_set);
    double acc = 0.0;
    for (int i = w.i0; i < w.i0 + w.rows; ++i) {
      for (int j = w.j0; j < w.j0 + w.cols; ++j) {
        acc += std::pow(std::abs(mean.at(i, j) - b.at(i, j)), q_norm) * cell_area;
      }
    }
    const double loss = std::pow(acc, 1.0 / q_norm);
    if (loss < best_loss) {  // strict: ties keep the smaller threshold
      best_loss = loss;
      best_s = s;
      found = true;
    }
  }
  if (!found) {
    throw DegenerateSetError(
        "distance_average_expectation: every candidate level set is degenerate");
  }
  SetEstimate est = level_estimate(std::move(mean), best_s,
                                   Estimator::DistanceAverage, opts);
  return est;
}

std::vector<Polyline> expected_boundary(const SetEstimate& estimate,
                                        double tolerance) {
  ScalarField shifted = estimate.source_field;
  if (estimate.threshold_used != 0.0) {
    for (double& v : shifted.values()) v -= estimate.threshold_used;
  }
  return zero_isocontour(shifted, tolerance);
}

}  // namespace odfset
