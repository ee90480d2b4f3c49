#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "odfset/contour.hpp"
#include "odfset/edt.hpp"
#include "odfset/errors.hpp"
#include "odfset/expectations.hpp"
#include "odfset/metrics.hpp"
#include "odfset/rng.hpp"
#include "odfset/shapes.hpp"
#include "support.hpp"

using namespace odfset;
using testsup::random_mask;

namespace {

BinaryMask disc_mask(const GridSpec& g, Vec2 c, double r) {
  return rasterize_mask({Ball{c, r}}, g);
}

}  // namespace

TEST_CASE("ODF expectation of one deterministic disc recovers the disc") {
  const GridSpec g({-2, -2}, 0.02, 200, 200);
  const ScalarField b = rasterize_odf({Ball{{0.1, 0}, 1.0}}, g);
  const SetEstimate est = odf_expectation({b}, {1.0});
  CHECK(est.mask == disc_mask(g, {0.1, 0}, 1.0));
  CHECK(est.threshold_used == 0.0);
  REQUIRE(est.boundary.size() == 1);
  for (const Vec2& v : est.boundary[0].points) {
    CHECK(std::abs(dist(v, {0.1, 0}) - 1.0) <= g.spacing());
  }
}

TEST_CASE("far-apart equal-weight tiny discs average to the empty set") {
  const GridSpec g({-2, -2}, 0.05, 80, 160);
  const ScalarField b1 = rasterize_odf({Ball{{0, 0}, 0.2}}, g);
  const ScalarField b2 = rasterize_odf({Ball{{3, 0}, 0.2}}, g);
  const SetEstimate est = odf_expectation({b1, b2}, {0.5, 0.5});
  CHECK(!est.mask.any());
  CHECK(est.boundary.empty());
}

TEST_CASE("balanced flashing discs with close centers average to an ellipse") {
  const GridSpec g({-2, -2}, 0.01, 400, 600);
  const ScalarField b1 = rasterize_odf({FlashingDisc{{1.5, 0}, 1.0, false}}, g);
  const ScalarField b2 = rasterize_odf({FlashingDisc{{1.5, 0}, 1.0, true}}, g);
  const SetEstimate est = odf_expectation({b1, b2}, {0.5, 0.5});
  REQUIRE(est.boundary.size() == 1);
  for (const Vec2& v : est.boundary[0].points) {
    CHECK(std::abs(0.5 * norm(v) + 0.5 * dist(v, {1.5, 0}) - 1.0) <=
          2.0 * g.spacing());
  }
}

TEST_CASE("empirical mean set: single realization and mean-radius identity") {
  const GridSpec g({-2, -2}, 0.02, 200, 200);
  const ScalarField one = rasterize_odf({Ball{{0, 0}, 1.13}}, g);
  CHECK(empirical_mean_set({one}).mask == disc_mask(g, {0, 0}, 1.13));

  const double radii[] = {0.73, 0.91, 1.07, 1.4};
  std::vector<ScalarField> fields;
  double mean_r = 0.0;
  for (double r : radii) {
    fields.push_back(rasterize_odf({Ball{{0, 0}, r}}, g));
    mean_r += r / 4.0;
  }
  const SetEstimate est = empirical_mean_set(fields);
  CHECK(est.estimator == Estimator::Empirical);
  CHECK(est.mask == disc_mask(g, {0, 0}, mean_r));
}

TEST_CASE("empirical mean of rotated half-planes recovers the mean direction") {
  const GridSpec g({-1, -1}, 2.0 / 128, 128, 128);
  const double angles[] = {0.35, 0.5, 0.62, 0.8};
  std::vector<ScalarField> fields;
  double ms = 0.0, mc = 0.0;
  for (double t : angles) {
    fields.push_back(rasterize_odf({UpperHalfPlane{t}}, g));
    ms += std::sin(t) / 4.0;
    mc += std::cos(t) / 4.0;
  }
  const SetEstimate est = empirical_mean_set(fields);
  const double want = std::atan2(ms, mc);
  REQUIRE(!est.boundary.empty());
  for (const auto& line : est.boundary) {
    for (const Vec2& v : line.points) {
      // Vertices sit on the zero line x sin(t) - y cos(t) = 0.
      CHECK(std::abs(v.x * std::sin(want) - v.y * std::cos(want)) <=
            2.0 * g.spacing());
    }
  }
}

TEST_CASE("coverage counts containment fractions") {
  const GridSpec g({-2, -2}, 0.1, 40, 40);
  const BinaryMask d = disc_mask(g, {0, 0}, 1.0);
  const ScalarField same = coverage({d, d, d});
  for (std::size_t k = 0; k < same.values().size(); ++k) {
    CHECK((same.values()[k] == 0.0 || same.values()[k] == 1.0));
    CHECK(same.values()[k] == (d.bits()[k] ? 1.0 : 0.0));
  }

  const BinaryMask far = disc_mask(g, {-1.2, -1.2}, 0.5);
  const ScalarField two = coverage({disc_mask(g, {1.2, 1.2}, 0.5), far});
  for (double v : two.values()) CHECK((v == 0.0 || v == 0.5));

  std::vector<BinaryMask> nested;
  for (double r : {0.4, 0.8, 1.2, 1.6}) nested.push_back(disc_mask(g, {0, 0}, r));
  const ScalarField cov = coverage(nested);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      const double r = norm(g.cell_center(i, j));
      double want = 0.0;
      for (double rr : {0.4, 0.8, 1.2, 1.6}) want += (r <= rr) ? 0.25 : 0.0;
      CHECK(cov.at(i, j) == want);
    }
  }
}

TEST_CASE("Vorob'ev expectation: deterministic input returns the mask") {
  const GridSpec g({-2, -2}, 0.1, 40, 40);
  const BinaryMask d = disc_mask(g, {0.2, -0.3}, 1.1);
  const SetEstimate est = vorobev_expectation({d, d, d});
  CHECK(est.mask == d);
  CHECK(est.threshold_used == 1.0);
}

TEST_CASE("Vorob'ev expectation: likely branch wins at p = 0.8") {
  RandomSetModel model;
  model.family = ShapeFamily::FlashingDisc;
  model.law = BernoulliLaw{0.8};
  model.alt_center = {3, 0};
  model.radius = 1.0;
  model.seed = 11;
  // Grid aligned so both discs cover congruent cell sets.
  const GridSpec g({-2, -2}, 0.05, 80, 160);
  std::vector<BinaryMask> masks;
  for (auto& [mask, field] : sample_realizations(model, 25, g)) {
    masks.push_back(std::move(mask));
  }
  const SetEstimate est = vorobev_expectation(masks);
  CHECK(est.mask == rasterize_mask({FlashingDisc{{3, 0}, 1.0, false}}, g));
}

TEST_CASE("Vorob'ev expectation: balanced overlapping discs give the intersection") {
  const GridSpec g({-2, -2}, 0.05, 80, 120);
  const BinaryMask a = disc_mask(g, {0, 0}, 1.0);
  const BinaryMask b = disc_mask(g, {1.5, 0}, 1.0);
  const SetEstimate est = vorobev_expectation({a, b});
  BinaryMask want(g);
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) want.set(i, j, a.at(i, j) && b.at(i, j));
  }
  REQUIRE(want.any());
  CHECK(est.mask == want);
  CHECK(est.threshold_used == 1.0);
}

TEST_CASE("Vorob'ev level is the closest-measure candidate") {
  const CounterRng rng(321);
  for (std::uint64_t t = 0; t < 25; ++t) {
    std::vector<BinaryMask> masks;
    const std::size_t m = 2 + rng.bits(0, t) % 6;
    double target = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      masks.push_back(random_mask(rng.child(1, t * 10 + k), 0, 12, 12, 0.4));
      target += masks.back().measure() / static_cast<double>(m);
    }
    const SetEstimate est = vorobev_expectation(masks);
    const ScalarField cov = coverage(masks);
    const double got_err = std::abs(est.mask.measure() - target);
    for (std::size_t k = 0; k <= m; ++k) {
      const double level = static_cast<double>(k) / static_cast<double>(m);
      double cells = 0.0;
      for (double v : cov.values()) cells += v >= level ? 1.0 : 0.0;
      const double err = std::abs(cells * cov.grid().cell_area() - target);
      CHECK(got_err <= err + 1e-12);
    }
  }
}

TEST_CASE("distance-average expectation: exact inputs are fixed points") {
  const GridSpec g({-2, -2}, 0.05, 80, 80);
  const BinaryMask d = disc_mask(g, {0, 0}, 1.2);
  const ScalarField b = oriented_distance_field(d);
  for (double q : {1.0, 2.0, 3.5}) {
    const SetEstimate est = distance_average_expectation({b}, q);
    CHECK(est.mask == d);
    // Any level in (-h/2, 0] cuts the same set; ties go to the smaller one.
    CHECK(est.threshold_used <= 0.0);
    CHECK(est.threshold_used > -d.grid().spacing());
  }

  const GridSpec gh({-2, -2}, 0.1, 30, 40);
  BinaryMask half(gh);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 18; ++j) half.set(i, j, true);
  }
  const ScalarField bh = oriented_distance_field(half);
  CHECK(distance_average_expectation({bh}, 2.0).mask == half);
}

TEST_CASE("distance-average scan returns a minimizer over candidate levels") {
  // Balanced interval-or-boundary mixture; the chosen level must beat every
  // other candidate level's loss (the scan itself is the oracle).
  const GridSpec g({-0.5, 0}, 0.01, 8, 200);
  const ScalarField slab = rasterize_odf({Slab{0.0, 1.0}}, g);
  const ScalarField edge = rasterize_odf({Slab{0.0, 1.0}, true}, g);
  const SetEstimate est = distance_average_expectation({slab, edge}, 2.0);
  const ScalarField mean = mean_fields({slab, edge});

  auto loss_at = [&](double s) {
    const BinaryMask m = sublevel_mask(mean, s);
    if (!m.any() || m.all()) return std::numeric_limits<double>::infinity();
    const ScalarField b = oriented_distance_field(m);
    double acc = 0.0;
    for (std::size_t k = 0; k < b.values().size(); ++k) {
      const double d = mean.values()[k] - b.values()[k];
      acc += d * d * g.cell_area();
    }
    return std::sqrt(acc);
  };
  const double best = loss_at(est.threshold_used);
  const CounterRng rng(9);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const double s = mean.values()[rng.bits(0, t) % mean.values().size()];
    CHECK(best <= loss_at(s) + 1e-12);
  }
  CHECK(best <= loss_at(0.0) + 1e-12);
}

TEST_CASE("distance-average rejects hopeless inputs and bad windows") {
  const GridSpec g({0, 0}, 1.0, 4, 4);
  CHECK_THROWS_AS(distance_average_expectation({ScalarField(g, 1.0)}, 2.0),
                  DegenerateSetError);
  const ScalarField b = oriented_distance_field(disc_mask(g, {2, 2}, 1.0));
  CHECK_THROWS_AS(distance_average_expectation({b}, 0.5), BadConfigError);
  CHECK_THROWS_AS(distance_average_expectation({b}, 2.0, Window{0, 0, 9, 9}),
                  BadConfigError);
}

TEST_CASE("expected boundary: circle, plateau interval, empty") {
  const GridSpec g({-2, -2}, 0.02, 200, 200);
  const SetEstimate disc = odf_expectation({rasterize_odf({Ball{{0, 0}, 1.0}}, g)},
                                           {1.0});
  const auto circle = expected_boundary(disc, 1e-9);
  REQUIRE(circle.size() == 1);
  for (const Vec2& v : circle[0].points) {
    CHECK(std::abs(norm(v) - 1.0) <= g.spacing());
  }

  // p = 0.5 interval-or-boundary: E b vanishes on all of [0, 1].
  const GridSpec g1({-0.5005, -0.004}, 0.001, 8, 2000);
  const ScalarField slab = rasterize_odf({Slab{0.0, 1.0}}, g1);
  const ScalarField edge = rasterize_odf({Slab{0.0, 1.0}, true}, g1);
  const SetEstimate est = odf_expectation({edge, slab}, {0.5, 0.5});
  const auto plateau = expected_boundary(est, 1e-9);
  REQUIRE(!plateau.empty());
  double lo = 1e9, hi = -1e9;
  for (const auto& line : plateau) {
    CHECK(line.closed);
    for (const Vec2& v : line.points) {
      lo = std::min(lo, v.x);
      hi = std::max(hi, v.x);
    }
  }
  CHECK(std::abs(lo) <= 2e-3);
  CHECK(std::abs(hi - 1.0) <= 2e-3);

  const SetEstimate empty = odf_expectation({ScalarField(g, 3.0)}, {1.0},
                                            {.lipschitz_check = false});
  CHECK(expected_boundary(empty, 1e-9).empty());
}

TEST_CASE("inclusion monotonicity for nested realizations") {
  const CounterRng rng(444);
  const GridSpec g({-2, -2}, 0.1, 40, 40);
  for (std::uint64_t t = 0; t < 20; ++t) {
    std::vector<ScalarField> inner, outer;
    for (int k = 0; k < 4; ++k) {
      const double r = rng.uniform(0, t * 10 + k, 0.3, 1.0);
      const double dr = rng.uniform(1, t * 10 + k, 0.05, 0.6);
      const Vec2 c{rng.uniform(2, t * 10 + k, -0.3, 0.3),
                   rng.uniform(3, t * 10 + k, -0.3, 0.3)};
      inner.push_back(oriented_distance_field(disc_mask(g, c, r)));
      outer.push_back(oriented_distance_field(disc_mask(g, c, r + dr)));
    }
    const BinaryMask mi = odf_expectation(inner, {0.25, 0.25, 0.25, 0.25}).mask;
    const BinaryMask mo = odf_expectation(outer, {0.25, 0.25, 0.25, 0.25}).mask;
    for (std::size_t k = 0; k < mi.bits().size(); ++k) {
      REQUIRE(mi.bits()[k] <= mo.bits()[k]);
    }
  }
}

TEST_CASE("bounding sets squeeze the expectation") {
  const CounterRng rng(555);
  const GridSpec g({-2, -2}, 0.1, 40, 40);
  const BinaryMask lower = disc_mask(g, {0, 0}, 0.5);
  const BinaryMask upper = disc_mask(g, {0, 0}, 1.5);
  std::vector<ScalarField> fields;
  for (int k = 0; k < 6; ++k) {
    const double r = rng.uniform(0, k, 0.55, 1.45);
    fields.push_back(oriented_distance_field(disc_mask(g, {0, 0}, r)));
  }
  const BinaryMask est = empirical_mean_set(fields).mask;
  // One boundary ring of slack for discretization.
  const ScalarField b_lower = oriented_distance_field(lower);
  const ScalarField b_upper = oriented_distance_field(upper);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      if (lower.at(i, j) && b_lower.at(i, j) < -1.5 * g.spacing()) {
        CHECK(est.at(i, j));
      }
      if (!upper.at(i, j) && b_upper.at(i, j) > 1.5 * g.spacing()) {
        CHECK(!est.at(i, j));
      }
    }
  }
}

TEST_CASE("the estimate's contour stays inside the expected-boundary band") {
  const CounterRng rng(666);
  const GridSpec g({-2, -2}, 0.05, 80, 80);
  std::vector<ScalarField> fields;
  for (int k = 0; k < 5; ++k) {
    const double r = rng.uniform(0, k, 0.5, 1.3);
    const Vec2 c{rng.uniform(1, k, -0.2, 0.2), rng.uniform(2, k, -0.2, 0.2)};
    fields.push_back(oriented_distance_field(disc_mask(g, c, r)));
  }
  const SetEstimate est = empirical_mean_set(fields);
  for (const auto& line : est.boundary) {
    for (const Vec2& v : line.points) {
      // Contour vertices are zeros of the interpolated mean field.
      CHECK(std::abs(interpolate_field(est.source_field, v)) <= 1e-9);
    }
  }
}

TEST_CASE("grid-exact equivariance: translation, rotation, dilation") {
  const CounterRng rng(777);
  const int n = 40;
  const GridSpec g({-2, -2}, 0.1, n, n);

  auto translate = [&](const BinaryMask& m, int di, int dj) {
    BinaryMask out(g);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const int si = i - di, sj = j - dj;
        if (si >= 0 && si < n && sj >= 0 && sj < n) out.set(i, j, m.at(si, sj));
      }
    }
    return out;
  };
  auto rot90 = [&](const BinaryMask& m) {
    BinaryMask out(g);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out.set(j, n - 1 - i, m.at(i, j));
    }
    return out;
  };

  for (std::uint64_t t = 0; t < 10; ++t) {
    std::vector<BinaryMask> masks;
    for (int k = 0; k < 3; ++k) {
      // Keep support well inside so translation stays on-grid.
      BinaryMask m(g);
      const auto blob = random_mask(rng.child(0, t * 10 + k), 0, 12, 12, 0.5);
      for (int i = 0; i < 12; ++i) {
        for (int j = 0; j < 12; ++j) m.set(i + 14, j + 14, blob.at(i, j));
      }
      if (!m.any()) m.set(20, 20, true);
      masks.push_back(m);
    }
    auto estimate_of = [&](const std::vector<BinaryMask>& ms) {
      std::vector<ScalarField> fs;
      for (const auto& m : ms) fs.push_back(oriented_distance_field(m));
      return empirical_mean_set(fs).mask;
    };
    const BinaryMask base = estimate_of(masks);

    const int di = 3, dj = -4;
    std::vector<BinaryMask> shifted;
    for (const auto& m : masks) shifted.push_back(translate(m, di, dj));
    const BinaryMask est_shifted = estimate_of(shifted);
    const BinaryMask shifted_est = translate(base, di, dj);
    // Compare away from the grid edge, where distances are unaffected.
    for (int i = 8; i < n - 8; ++i) {
      for (int j = 8; j < n - 8; ++j) {
        REQUIRE(est_shifted.at(i, j) == shifted_est.at(i, j));
      }
    }

    std::vector<BinaryMask> rotated;
    for (const auto& m : masks) rotated.push_back(rot90(m));
    CHECK(estimate_of(rotated) == rot90(base));

    // Dilation: scaling the grid spacing scales every distance; the cellwise
    // estimate is unchanged.
    const GridSpec g3({-6, -6}, 0.3, n, n);
    std::vector<ScalarField> dilated;
    for (const auto& m : masks) {
      dilated.push_back(oriented_distance_field(BinaryMask(g3, m.bits())));
    }
    const BinaryMask est_dilated = empirical_mean_set(dilated).mask;
    CHECK(est_dilated.bits() == base.bits());
  }
}

TEST_CASE("denoising: scattered single-cell realizations average to nothing") {
  const GridSpec g({0, 0}, 1.0, 16, 16);
  BinaryMask a(g), b(g);
  a.set(3, 4, true);
  b.set(11, 9, true);
  const SetEstimate est = empirical_mean_set(
      {oriented_distance_field(a), oriented_distance_field(b)});
  CHECK(!est.mask.any());
}

TEST_CASE("Lipschitz warning fires on corrupted inputs") {
  static int warnings = 0;
  warnings = 0;
  const GridSpec g({0, 0}, 1.0, 8, 8);
  ScalarField bad = oriented_distance_field(
      rasterize_mask({Ball{{4, 4}, 2.0}}, g));
  bad.at(2, 2) += 10.0;
  ExpectationOptions opts;
  opts.warning_sink = [](const std::string&) { ++warnings; };
  (void)odf_expectation({bad}, {1.0}, opts);
  CHECK(warnings == 1);
}
