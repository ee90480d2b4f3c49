#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "odfset/contour.hpp"
#include "odfset/edt.hpp"
#include "odfset/errors.hpp"
#include "odfset/grid.hpp"
#include "odfset/rng.hpp"
#include "odfset/shapes.hpp"
#include "support.hpp"

using namespace odfset;
using testsup::brute_force_distance;
using testsup::random_mask;

TEST_CASE("grid construction validates its invariants") {
  CHECK_THROWS_AS(GridSpec({0, 0}, 0.0, 4, 4), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec({0, 0}, -1.0, 4, 4), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec({0, 0}, 1.0, 0, 4), std::invalid_argument);
  const GridSpec g({1.0, 2.0}, 0.5, 3, 4);
  const Vec2 c = g.cell_center(2, 1);
  CHECK(c.x == doctest::Approx(1.75));
  CHECK(c.y == doctest::Approx(3.25));
  CHECK(g.cell_area() == doctest::Approx(0.25));
}

TEST_CASE("mask measure counts cells times cell area") {
  BinaryMask m(GridSpec({0, 0}, 0.5, 4, 4));
  m.set(0, 0, true);
  m.set(3, 2, true);
  CHECK(m.count() == 2);
  CHECK(m.measure() == doctest::Approx(0.5));
}

TEST_CASE("distance transform: all-true mask gives a zero field") {
  const BinaryMask m(GridSpec({0, 0}, 1.0, 5, 7), true);
  const ScalarField d = distance_transform(m);
  CHECK(d.min_value() == 0.0);
  CHECK(d.max_value() == 0.0);
}

TEST_CASE("distance transform: single source, Pythagorean offset") {
  BinaryMask m(GridSpec({0, 0}, 1.0, 9, 9));
  m.set(2, 2, true);
  const ScalarField d = distance_transform(m);
  CHECK(d.at(5, 6) == 5.0);  // offset (3, 4)
  CHECK(d.at(2, 2) == 0.0);
}

TEST_CASE("distance transform rejects the empty set") {
  CHECK_THROWS_AS(distance_transform(BinaryMask(GridSpec({0, 0}, 1.0, 3, 3))),
                  EmptySetError);
}

TEST_CASE("distance transform is bit-identical to the brute-force oracle") {
  const CounterRng rng(101);
  for (std::uint64_t t = 0; t < 40; ++t) {
    const int rows = 1 + static_cast<int>(rng.bits(0, t) % 32);
    const int cols = 1 + static_cast<int>(rng.bits(1, t) % 32);
    const double density = 0.05 + 0.9 * rng.uniform(2, t);
    BinaryMask m = random_mask(rng.child(3, t), 0, rows, cols, density, 0.25);
    if (!m.any()) m.set(0, 0, true);
    const ScalarField got = distance_transform(m);
    const ScalarField want = brute_force_distance(m);
    for (std::size_t k = 0; k < got.values().size(); ++k) {
      REQUIRE(got.values()[k] == want.values()[k]);
    }
  }
}

TEST_CASE("oriented distance field on a left-half mask is a shifted ramp") {
  const double h = 0.5;
  const int k = 3;  // last true column
  const GridSpec g({0, 0}, h, 4, 8);
  BinaryMask m(g);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j <= k; ++j) m.set(i, j, true);
  }
  const ScalarField b = oriented_distance_field(m);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 8; ++j) {
      CHECK(b.at(i, j) == doctest::Approx(h * (j - k) - h / 2).epsilon(1e-12));
      if (j <= k) CHECK(b.at(i, j) < 0.0);
      if (j > k) CHECK(b.at(i, j) > 0.0);
    }
  }
}

TEST_CASE("oriented distance field of a disc mask tracks the closed form") {
  const GridSpec g({-2, -2}, 0.02, 200, 200);
  const ParametricShape disc{Ball{{0.1, -0.2}, 1.1}};
  const BinaryMask m = rasterize_mask(disc, g);
  const ScalarField b = oriented_distance_field(m);
  double worst = 0.0;
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      worst = std::max(worst,
                       std::abs(b.at(i, j) - odf_closed_form(disc, g.cell_center(i, j))));
    }
  }
  CHECK(worst <= g.spacing());
}

TEST_CASE("oriented distance field is exactly antisymmetric under complement") {
  const CounterRng rng(7);
  for (std::uint64_t t = 0; t < 20; ++t) {
    BinaryMask m = random_mask(rng.child(0, t), 0, 17, 13, 0.4);
    if (!m.any()) m.set(1, 1, true);
    if (m.all()) m.set(0, 0, false);
    const ScalarField b = oriented_distance_field(m);
    const ScalarField bc = oriented_distance_field(complement(m));
    for (std::size_t k = 0; k < b.values().size(); ++k) {
      REQUIRE(bc.values()[k] == -b.values()[k]);
      REQUIRE(b.values()[k] != 0.0);
    }
  }
}

TEST_CASE("oriented distance field rejects degenerate masks") {
  CHECK_THROWS_AS(oriented_distance_field(BinaryMask(GridSpec({0, 0}, 1, 3, 3))),
                  DegenerateSetError);
  CHECK_THROWS_AS(
      oriented_distance_field(BinaryMask(GridSpec({0, 0}, 1, 3, 3), true)),
      DegenerateSetError);
}

TEST_CASE("discrete ODFs satisfy the all-pairs Lipschitz-1 bound") {
  const CounterRng rng(23);
  for (std::uint64_t t = 0; t < 10; ++t) {
    BinaryMask m = random_mask(rng.child(0, t), 0, 14, 14, 0.35, 0.2);
    if (!m.any()) m.set(3, 3, true);
    if (m.all()) m.set(0, 0, false);
    CHECK(testsup::lipschitz_excess(oriented_distance_field(m)) <= 1e-12);
  }
}

TEST_CASE("mask inclusion reverses the ODF order") {
  const CounterRng rng(29);
  for (std::uint64_t t = 0; t < 20; ++t) {
    BinaryMask small = random_mask(rng.child(0, t), 0, 12, 15, 0.3);
    if (!small.any()) small.set(2, 2, true);
    BinaryMask big = small;
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 15; ++j) {
        if (rng.uniform(1, t * 1000 + i * 15 + j) < 0.2) big.set(i, j, true);
      }
    }
    if (big.all()) big.set(11, 14, false);
    const ScalarField bs = oriented_distance_field(small);
    const ScalarField bb = oriented_distance_field(big);
    for (std::size_t k = 0; k < bs.values().size(); ++k) {
      REQUIRE(bb.values()[k] <= bs.values()[k]);
    }
  }
}

TEST_CASE("weighted mean: identity, half-plane average, weight validation") {
  const GridSpec g({-1, -1}, 0.1, 20, 40);
  const ScalarField f0 = rasterize_odf({HalfPlane{0.0}}, g);
  const ScalarField f2 = rasterize_odf({HalfPlane{2.0}}, g);
  const ScalarField f1 = rasterize_odf({HalfPlane{1.0}}, g);

  const ScalarField id = weighted_mean_fields({f0}, {1.0});
  for (std::size_t k = 0; k < id.values().size(); ++k) {
    CHECK(id.values()[k] == f0.values()[k]);
  }
  const ScalarField avg = weighted_mean_fields({f0, f2}, {0.5, 0.5});
  for (std::size_t k = 0; k < avg.values().size(); ++k) {
    CHECK(avg.values()[k] == doctest::Approx(f1.values()[k]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(weighted_mean_fields({f0, f2}, {0.5, 0.6}), BadWeightsError);
  CHECK_THROWS_AS(weighted_mean_fields({f0, f2}, {0.5}), BadWeightsError);
  const ScalarField other(GridSpec({0, 0}, 0.1, 20, 40));
  CHECK_THROWS_AS(weighted_mean_fields({f0, other}, {0.5, 0.5}), GridMismatchError);
}

TEST_CASE("slab/boundary mixture matches the piecewise closed form") {
  // Interval [0, 1] on a near-1-D grid; weights (p, 1-p) on (boundary, slab).
  const double p = 0.7;
  const GridSpec g({-0.5005, 0}, 0.001, 1, 2000);
  const ScalarField slab = rasterize_odf({Slab{0.0, 1.0}}, g);
  const ScalarField edge = rasterize_odf({Slab{0.0, 1.0}, true}, g);
  const ScalarField mean = weighted_mean_fields({edge, slab}, {p, 1.0 - p});
  for (int j = 0; j < 2000; ++j) {
    const double x = g.cell_center(0, j).x;
    if (x > 0.0 && x <= 0.5) {
      CHECK(mean.at(0, j) == doctest::Approx((2 * p - 1) * x).epsilon(1e-9));
    }
  }
}

TEST_CASE("sublevel mask: extremes and disc round-trip") {
  const GridSpec g({-2, -2}, 0.05, 80, 80);
  const BinaryMask disc = rasterize_mask({Ball{{0, 0}, 1.3}}, g);
  const ScalarField b = oriented_distance_field(disc);
  CHECK(sublevel_mask(b, b.max_value()).all());
  CHECK(!sublevel_mask(b, b.min_value() - 1.0).any());
  CHECK(sublevel_mask(b, 0.0) == disc);
}

TEST_CASE("zero isocontour of a circle field stays on the circle") {
  const GridSpec g({-2, -2}, 0.02, 200, 200);
  const Vec2 c{0.15, -0.1};
  const double r = 1.2;
  const ScalarField b = rasterize_odf({Ball{c, r}}, g);
  const auto lines = zero_isocontour(b, 1e-9);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].closed);
  for (const Vec2& v : lines[0].points) {
    CHECK(std::abs(dist(v, c) - r) <= g.spacing());
  }
}

TEST_CASE("zero isocontour: constant-sign fields and straight lines") {
  const GridSpec g({0, 0}, 0.1, 30, 30);
  CHECK(zero_isocontour(ScalarField(g, 2.5), 1e-9).empty());

  std::vector<double> values(g.size());
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 30; ++j) {
      values[static_cast<std::size_t>(i) * 30 + j] = g.cell_center(i, j).x - 1.0;
    }
  }
  const auto lines = zero_isocontour(ScalarField(g, values), 1e-9);
  REQUIRE(lines.size() == 1);
  CHECK(!lines[0].closed);
  for (const Vec2& v : lines[0].points) {
    CHECK(std::abs(v.x - 1.0) <= g.spacing());
  }
}

TEST_CASE("zero isocontour reports plateau regions as boundary loops") {
  const GridSpec g({0, 0}, 1.0, 9, 9);
  std::vector<double> values(g.size(), 1.0);
  for (int i = 3; i <= 5; ++i) {
    for (int j = 2; j <= 6; ++j) values[static_cast<std::size_t>(i) * 9 + j] = 0.0;
  }
  const auto lines = zero_isocontour(ScalarField(g, values), 1e-9);
  bool found_loop = false;
  for (const auto& line : lines) found_loop = found_loop || line.closed;
  CHECK(found_loop);
}

TEST_CASE("grid refinement: discrete ODF error halves with the spacing") {
  const ParametricShape shapes_under_test[] = {
      {Ball{{0.013, -0.027}, 1.03}}, {UpperHalfPlane{0.6}}};
  for (const auto& shape : shapes_under_test) {
    double prev = -1.0;
    for (const double h : {0.04, 0.02, 0.01}) {
      const int n = static_cast<int>(std::lround(4.0 / h));
      const GridSpec g({-2.0, -2.0}, h, n, n);
      const ScalarField b = oriented_distance_field(rasterize_mask(shape, g));
      double worst = 0.0;
      const int m = n / 4;  // interior window dodges window-truncation bias
      for (int i = m; i < n - m; ++i) {
        for (int j = m; j < n - m; ++j) {
          worst = std::max(
              worst, std::abs(b.at(i, j) - odf_closed_form(shape, g.cell_center(i, j))));
        }
      }
      CHECK(worst <= 2.0 * h);
      if (prev > 0.0) {
        const double ratio = prev / worst;
        CHECK(ratio >= 1.6);
        CHECK(ratio <= 2.4);
      }
      prev = worst;
    }
  }
}

TEST_CASE("means of Lipschitz-1 fields stay Lipschitz-1") {
  const CounterRng rng(31);
  std::vector<ScalarField> fields;
  for (std::uint64_t t = 0; t < 5; ++t) {
    BinaryMask m = random_mask(rng.child(0, t), 0, 12, 12, 0.4);
    if (!m.any()) m.set(5, 5, true);
    if (m.all()) m.set(0, 0, false);
    fields.push_back(oriented_distance_field(m));
  }
  CHECK(testsup::lipschitz_excess(mean_fields(fields)) <= 1e-12);
}
