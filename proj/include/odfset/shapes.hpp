#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "odfset/grid.hpp"
#include "odfset/rng.hpp"

namespace odfset {

// Analytic shapes with closed-form oriented distance functions.

struct Singleton {
  Vec2 point;
};

/// Closed ball |x - center| <= radius.
struct Ball {
  Vec2 center;
  double radius = 1.0;
};

/// {x : x1 <= theta1}.
struct HalfPlane {
  double theta1 = 0.0;
};

/// {x : x2 >= x1 tan(theta)}, boundary through the origin at angle theta.
struct UpperHalfPlane {
  double theta = 0.0;
};

/// Disc of radius r at the origin (branch origin) or at alt_center (branch
/// shifted).
struct FlashingDisc {
  Vec2 alt_center;
  double radius = 1.0;
  bool shifted = false;
};

/// Vertical slab {x : lo <= x1 <= hi}; the 1-D interval [lo, hi] embedded in
/// the plane.
struct Slab {
  double lo = 0.0;
  double hi = 1.0;
};

using ShapeKind =
    std::variant<Singleton, Ball, HalfPlane, UpperHalfPlane, FlashingDisc, Slab>;

/// A shape, or the boundary of one (boundary_of true): b_boundary = |b_base|.
struct ParametricShape {
  ShapeKind kind;
  bool boundary_of = false;
};

void validate(const ParametricShape& shape);

/// Exact continuum oriented distance value of the shape at x.
double odf_closed_form(const ParametricShape& shape, Vec2 x);

/// Closed-form ODF sampled at all cell centers.
ScalarField rasterize_odf(const ParametricShape& shape, const GridSpec& grid);

/// Cells whose closed-form ODF is <= 0.
BinaryMask rasterize_mask(const ParametricShape& shape, const GridSpec& grid);

/// Factorization b(x; theta) = h(x) . g(theta); construction self-checks the
/// identity against the closed form at 1000 random (x, theta) pairs.
struct SeparableODF {
  std::vector<std::string> h_names;
  std::vector<std::string> g_names;
  std::vector<std::function<double(Vec2)>> h;
  std::vector<std::function<double(double)>> g;

  std::size_t order() const { return h.size(); }
  double evaluate(Vec2 x, double theta) const;
};

enum class ShapeFamily : std::uint8_t {
  Singleton,       // parameter: position (2 coordinates)
  Ball,            // parameter: radius; fixed center
  BallSqrtRadius,  // radius = sqrt(parameter); fixed center
  HalfPlane,       // parameter: theta1
  UpperHalfPlane,  // parameter: boundary angle
  FlashingDisc,    // Bernoulli(p): origin disc with prob p, shifted otherwise
  SlabOrBoundary,  // Bernoulli(p): slab boundary with prob p, slab otherwise
};

std::string family_name(ShapeFamily family);
ShapeFamily family_from_name(const std::string& name);

/// Paper-form decomposition for Ball (fixed center), HalfPlane and
/// UpperHalfPlane; FlashingDisc has no separable form.
/// Throws NotSeparableError for the other families.
SeparableODF separable_decomposition(ShapeFamily family, Vec2 ball_center = {});

class CovMatrix {
 public:
  /// Row-major K x K matrix; must be symmetric and positive semidefinite
  /// within 1e-9.
  CovMatrix(std::size_t order, std::vector<double> entries);

  std::size_t order() const { return order_; }
  double at(std::size_t r, std::size_t c) const { return entries_[r * order_ + c]; }

 private:
  std::size_t order_;
  std::vector<double> entries_;
};

/// Space covariance of a separable field: h(x)^T C h(y).
double separable_covariance(const SeparableODF& decomp, const CovMatrix& cov_g,
                            Vec2 x, Vec2 y);

// Parameter laws.

struct PointMass {
  std::vector<double> value;
};

/// Independent Uniform(a[k], b[k]) per coordinate.
struct UniformLaw {
  std::vector<double> a;
  std::vector<double> b;
};

/// Two-outcome law over shape branches; p is the probability of the first
/// branch (origin disc for FlashingDisc, boundary for SlabOrBoundary).
struct BernoulliLaw {
  double p = 0.5;
};

struct DiscreteLaw {
  std::vector<std::vector<double>> values;
  std::vector<double> probs;
};

using ParamLaw = std::variant<PointMass, UniformLaw, BernoulliLaw, DiscreteLaw>;

/// Distribution over parametric shapes; source of i.i.d. realizations.
struct RandomSetModel {
  ShapeFamily family = ShapeFamily::Ball;
  ParamLaw law = PointMass{{1.0}};
  std::uint64_t seed = 0;
  // Fixed geometry per family.
  Vec2 center;            // Ball / BallSqrtRadius center
  Vec2 alt_center;        // FlashingDisc shifted center
  double radius = 1.0;    // FlashingDisc radius
  double slab_lo = 0.0;   // SlabOrBoundary interval
  double slab_hi = 1.0;
};

void validate(const RandomSetModel& model);

/// Number of scalar parameters a draw produces for this model.
std::size_t param_dim(const RandomSetModel& model);

/// Draw index -> parameter vector; pure in (model.seed, index).
std::vector<double> draw_parameter(const RandomSetModel& model, std::uint64_t index);

/// Shape realized by a parameter vector.
ParametricShape shape_for(const RandomSetModel& model,
                          const std::vector<double>& theta);

/// m i.i.d. realizations rendered on the grid: mask of cells with closed-form
/// b <= 0 plus the exact closed-form ODF field.
std::vector<std::pair<BinaryMask, ScalarField>> sample_realizations(
    const RandomSetModel& model, std::size_t m, const GridSpec& grid);

/// Exact E[b_A(x)] for the cataloged analytic cases; throws NoClosedFormError
/// otherwise.
double expected_odf_closed_form(const RandomSetModel& model, Vec2 x);

/// Whether expected_odf_closed_form supports the model.
bool has_expected_closed_form(const RandomSetModel& model);

/// E[b] sampled at all cell centers.
ScalarField rasterize_expected_odf(const RandomSetModel& model, const GridSpec& grid);

/// Mean of the parameter law (per coordinate).
std::vector<double> law_mean(const ParamLaw& law);

}  // namespace odfset
