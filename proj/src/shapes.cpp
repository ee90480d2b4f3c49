#include "odfset/shapes.hpp"

#include <cmath>

#include "odfset/errors.hpp"

namespace odfset {
namespace {

double slab_odf(const Slab& s, double x1) { return std::max(x1 - s.hi, s.lo - x1); }

double base_odf(const ShapeKind& kind, Vec2 x) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Singleton>) {
          return dist(x, s.point);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return dist(x, s.center) - s.radius;
        } else if constexpr (std::is_same_v<T, HalfPlane>) {
          return x.x - s.theta1;
        } else if constexpr (std::is_same_v<T, UpperHalfPlane>) {
          // Total form of |x| sin(theta - omega) with omega = atan2(x2, x1);
          // continuous everywhere, zero at the origin.
          return x.x * std::sin(s.theta) - x.y * std::cos(s.theta);
        } else if constexpr (std::is_same_v<T, FlashingDisc>) {
          const Vec2 c = s.shifted ? s.alt_center : Vec2{0.0, 0.0};
          return dist(x, c) - s.radius;
        } else {
          return slab_odf(s, x.x);
        }
      },
      kind);
}

void check_kind(const ShapeKind& kind) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          if (!(s.radius > 0.0)) throw std::invalid_argument("Ball: radius must be positive");
        } else if constexpr (std::is_same_v<T, FlashingDisc>) {
          if (!(s.radius > 0.0)) throw std::invalid_argument("FlashingDisc: radius must be positive");
        } else if constexpr (std::is_same_v<T, Slab>) {
          if (!(s.lo < s.hi)) throw std::invalid_argument("Slab: lo must be below hi");
        }
      },
      kind);
}

}  // namespace

void validate(const ParametricShape& shape) { check_kind(shape.kind); }

double odf_closed_form(const ParametricShape& shape, Vec2 x) {
  const double b = base_odf(shape.kind, x);
  return shape.boundary_of ? std::abs(b) : b;
}

ScalarField rasterize_odf(const ParametricShape& shape, const GridSpec& grid) {
  std::vector<double> values(grid.size());
  for (int i = 0; i < grid.rows(); ++i) {
    for (int j = 0; j < grid.cols(); ++j) {
      values[static_cast<std::size_t>(i) * grid.cols() + j] =
          odf_closed_form(shape, grid.cell_center(i, j));
    }
  }
  return ScalarField(grid, std::move(values));
}

BinaryMask rasterize_mask(const ParametricShape& shape, const GridSpec& grid) {
  std::vector<std::uint8_t> bits(grid.size());
  for (int i = 0; i < grid.rows(); ++i) {
    for (int j = 0; j < grid.cols(); ++j) {
      bits[static_cast<std::size_t>(i) * grid.cols() + j] =
          odf_closed_form(shape, grid.cell_center(i, j)) <= 0.0 ? 1 : 0;
    }
  }
  return BinaryMask(grid, std::move(bits));
}

double SeparableODF::evaluate(Vec2 x, double theta) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) acc += h[k](x) * g[k](theta);
  return acc;
}

std::string family_name(ShapeFamily family) {
  switch (family) {
    case ShapeFamily::Singleton: return "singleton";
    case ShapeFamily::Ball: return "ball";
    case ShapeFamily::BallSqrtRadius: return "ball_sqrt_radius";
    case ShapeFamily::HalfPlane: return "half_plane";
    case ShapeFamily::UpperHalfPlane: return "upper_half_plane";
    case ShapeFamily::FlashingDisc: return "flashing_disc";
    case ShapeFamily::SlabOrBoundary: return "slab_or_boundary";
  }
  throw std::invalid_argument("family_name: unknown family");
}

ShapeFamily family_from_name(const std::string& name) {
  if (name == "singleton") return ShapeFamily::Singleton;
  if (name == "ball") return ShapeFamily::Ball;
  if (name == "ball_sqrt_radius") return ShapeFamily::BallSqrtRadius;
  if (name == "half_plane") return ShapeFamily::HalfPlane;
  if (name == "upper_half_plane") return ShapeFamily::UpperHalfPlane;
  if (name == "flashing_disc") return ShapeFamily::FlashingDisc;
  if (name == "slab_or_boundary") return ShapeFamily::SlabOrBoundary;
  throw ParseError("unknown shape family: " + name);
}

namespace {

void self_check(const SeparableODF& decomp, ShapeFamily family, Vec2 ball_center) {
  const CounterRng rng(0x5E9A7AB1EULL);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const Vec2 x{rng.uniform(0, i, -5.0, 5.0), rng.uniform(1, i, -5.0, 5.0)};
    double theta = 0.0;
    ParametricShape shape;
    switch (family) {
      case ShapeFamily::Ball:
        theta = rng.uniform(2, i, 0.1, 3.0);
        shape.kind = Ball{ball_center, theta};
        break;
      case ShapeFamily::HalfPlane:
        theta = rng.uniform(2, i, -3.0, 3.0);
        shape.kind = HalfPlane{theta};
        break;
      case ShapeFamily::UpperHalfPlane:
        theta = rng.uniform(2, i, -1.5, 1.5);
        shape.kind = UpperHalfPlane{theta};
        break;
      default:
        return;
    }
    const double direct = odf_closed_form(shape, x);
    const double split = decomp.evaluate(x, theta);
    if (std::abs(direct - split) > 1e-12) {
      throw std::logic_error("SeparableODF: self-check failed");
    }
  }
}

}  // namespace

SeparableODF separable_decomposition(ShapeFamily family, Vec2 ball_center) {
  SeparableODF d;
  switch (family) {
    case ShapeFamily::Ball:
      d.h_names = {"|x - c|", "-1"};
      d.g_names = {"1", "theta"};
      d.h = {[ball_center](Vec2 x) { return dist(x, ball_center); },
             [](Vec2) { return -1.0; }};
      d.g = {[](double) { return 1.0; }, [](double t) { return t; }};
      break;
    case ShapeFamily::HalfPlane:
      d.h_names = {"x1", "-1"};
      d.g_names = {"1", "theta"};
      d.h = {[](Vec2 x) { return x.x; }, [](Vec2) { return -1.0; }};
      d.g = {[](double) { return 1.0; }, [](double t) { return t; }};
      break;
    case ShapeFamily::UpperHalfPlane:
      d.h_names = {"x1", "-x2"};
      d.g_names = {"sin(theta)", "cos(theta)"};
      d.h = {[](Vec2 x) { return x.x; }, [](Vec2 x) { return -x.y; }};
      d.g = {[](double t) { return std::sin(t); },
             [](double t) { return std::cos(t); }};
      break;
    default:
      throw NotSeparableError("separable_decomposition: " + family_name(family) +
                              " has no separable form");
  }
  self_check(d, family, ball_center);
  return d;
}

CovMatrix::CovMatrix(std::size_t order, std::vector<double> entries)
    : order_(order), entries_(std::move(entries)) {
  if (entries_.size() != order_ * order_) {
    throw DimMismatchError("CovMatrix: entry count must be order^2");
  }
  for (std::size_t r = 0; r < order_; ++r) {
    for (std::size_t c = r + 1; c < order_; ++c) {
      if (std::abs(at(r, c) - at(c, r)) > 1e-9) {
        throw std::invalid_argument("CovMatrix: not symmetric");
      }
    }
  }
  // PSD check: cyclic Jacobi on a working copy; smallest eigenvalue >= -1e-9.
  std::vector<double> a = entries_;
  auto ref = [&](std::size_t r, std::size_t c) -> double& { return a[r * order_ + c]; };
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < order_; ++p)
      for (std::size_t q = p + 1; q < order_; ++q) off += ref(p, q) * ref(p, q);
    if (off < 1e-24) break;
    for (std::size_t p = 0; p < order_; ++p) {
      for (std::size_t q = p + 1; q < order_; ++q) {
        if (std::abs(ref(p, q)) < 1e-18) continue;
        const double phi = 0.5 * std::atan2(2.0 * ref(p, q), ref(q, q) - ref(p, p));
        const double c = std::cos(phi), s = std::sin(phi);
        for (std::size_t k = 0; k < order_; ++k) {
          const double akp = ref(k, p), akq = ref(k, q);
          ref(k, p) = c * akp - s * akq;
          ref(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < order_; ++k) {
          const double apk = ref(p, k), aqk = ref(q, k);
          ref(p, k) = c * apk - s * aqk;
          ref(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  for (std::size_t k = 0; k < order_; ++k) {
    if (ref(k, k) < -1e-9) {
      throw std::invalid_argument("CovMatrix: not positive semidefinite");
    }
  }
}

double separable_covariance(const SeparableODF& decomp, const CovMatrix& cov_g,
                            Vec2 x, Vec2 y) {
  if (cov_g.order() != decomp.order()) {
    throw DimMismatchError("separable_covariance: matrix order must match decomposition");
  }
  double acc = 0.0;
  for (std::size_t r = 0; r < decomp.order(); ++r) {
    for (std::size_t c = 0; c < decomp.order(); ++c) {
      acc += decomp.h[r](x) * cov_g.at(r, c) * decomp.h[c](y);
    }
  }
  return acc;
}

void validate(const RandomSetModel& model) {
  const std::size_t dim = param_dim(model);
  std::visit(
      [&](const auto& law) {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          if (law.value.size() != dim) throw BadConfigError("PointMass: wrong parameter dimension");
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          if (law.a.size() != dim || law.b.size() != dim) {
            throw BadConfigError("Uniform: wrong parameter dimension");
          }
          for (std::size_t k = 0; k < dim; ++k) {
            if (!(law.a[k] < law.b[k])) throw BadConfigError("Uniform: requires a < b");
          }
        } else if constexpr (std::is_same_v<T, BernoulliLaw>) {
          if (!(law.p >= 0.0 && law.p <= 1.0)) throw BadConfigError("Bernoulli: p must be in [0,1]");
        } else {
          if (law.values.empty() || law.values.size() != law.probs.size()) {
            throw BadConfigError("Discrete: values and probs must match");
          }
          double sum = 0.0;
          for (double p : law.probs) {
            if (!(p >= 0.0 && p <= 1.0)) throw BadConfigError("Discrete: probs must be in [0,1]");
            sum += p;
          }
          if (std::abs(sum - 1.0) > 1e-12) throw BadConfigError("Discrete: probs must sum to 1");
          for (const auto& v : law.values) {
            if (v.size() != dim) throw BadConfigError("Discrete: wrong parameter dimension");
          }
        }
      },
      model.law);
  const bool two_branch = model.family == ShapeFamily::FlashingDisc ||
                          model.family == ShapeFamily::SlabOrBoundary;
  if (two_branch && !std::holds_alternative<BernoulliLaw>(model.law)) {
    throw BadConfigError("two-branch families require a Bernoulli law");
  }
  if (model.family == ShapeFamily::FlashingDisc && !(model.radius > 0.0)) {
    throw BadConfigError("FlashingDisc: radius must be positive");
  }
  if (model.family == ShapeFamily::SlabOrBoundary && !(model.slab_lo < model.slab_hi)) {
    throw BadConfigError("SlabOrBoundary: requires slab_lo < slab_hi");
  }
}

std::size_t param_dim(const RandomSetModel& model) {
  return model.family == ShapeFamily::Singleton ? 2 : 1;
}

std::vector<double> draw_parameter(const RandomSetModel& model, std::uint64_t index) {
  const CounterRng rng(model.seed);
  const std::size_t dim = param_dim(model);
  return std::visit(
      [&](const auto& law) -> std::vector<double> {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return law.value;
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          std::vector<double> theta(dim);
          for (std::size_t k = 0; k < dim; ++k) {
            theta[k] = rng.uniform(k, index, law.a[k], law.b[k]);
          }
          return theta;
        } else if constexpr (std::is_same_v<T, BernoulliLaw>) {
          return {rng.uniform(0, index) < law.p ? 1.0 : 0.0};
        } else {
          const double u = rng.uniform(0, index);
          double acc = 0.0;
          for (std::size_t k = 0; k < law.values.size(); ++k) {
            acc += law.probs[k];
            if (u < acc) return law.values[k];
          }
          return law.values.back();
        }
      },
      model.law);
}

ParametricShape shape_for(const RandomSetModel& model,
                          const std::vector<double>& theta) {
  ParametricShape shape;
  switch (model.family) {
    case ShapeFamily::Singleton:
      shape.kind = Singleton{{theta.at(0), theta.at(1)}};
      break;
    case ShapeFamily::Ball:
      shape.kind = Ball{model.center, theta.at(0)};
      break;
    case ShapeFamily::BallSqrtRadius:
      shape.kind = Ball{model.center, std::sqrt(theta.at(0))};
      break;
    case ShapeFamily::HalfPlane:
      shape.kind = HalfPlane{theta.at(0)};
      break;
    case ShapeFamily::UpperHalfPlane:
      shape.kind = UpperHalfPlane{theta.at(0)};
      break;
    case ShapeFamily::FlashingDisc:
      shape.kind = FlashingDisc{model.alt_center, model.radius, theta.at(0) == 0.0};
      break;
    case ShapeFamily::SlabOrBoundary:
      shape.kind = Slab{model.slab_lo, model.slab_hi};
      shape.boundary_of = theta.at(0) != 0.0;
      break;
  }
  validate(shape);
  return shape;
}

std::vector<std::pair<BinaryMask, ScalarField>> sample_realizations(
    const RandomSetModel& model, std::size_t m, const GridSpec& grid) {
  validate(model);
  std::vector<std::pair<BinaryMask, ScalarField>> out;
  out.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    const ParametricShape shape = shape_for(model, draw_parameter(model, i));
    out.emplace_back(rasterize_mask(shape, grid), rasterize_odf(shape, grid));
  }
  return out;
}

std::vector<double> law_mean(const ParamLaw& law) {
  return std::visit(
      [](const auto& l) -> std::vector<double> {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return l.value;
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          std::vector<double> m(l.a.size());
          for (std::size_t k = 0; k < m.size(); ++k) m[k] = 0.5 * (l.a[k] + l.b[k]);
          return m;
        } else if constexpr (std::is_same_v<T, BernoulliLaw>) {
          return {l.p};
        } else {
          std::vector<double> m(l.values.front().size(), 0.0);
          for (std::size_t k = 0; k < l.values.size(); ++k) {
            for (std::size_t c = 0; c < m.size(); ++c) m[c] += l.probs[k] * l.values[k][c];
          }
          return m;
        }
      },
      law);
}

namespace {

// E[sqrt(theta)] for laws on [0, inf).
std::optional<double> mean_sqrt(const ParamLaw& law) {
  if (const auto* pm = std::get_if<PointMass>(&law)) {
    return std::sqrt(pm->value.at(0));
  }
  if (const auto* u = std::get_if<UniformLaw>(&law)) {
    const double a = u->a.at(0), b = u->b.at(0);
    if (a < 0.0) return std::nullopt;
    return (2.0 / 3.0) * (std::pow(b, 1.5) - std::pow(a, 1.5)) / (b - a);
  }
  if (const auto* d = std::get_if<DiscreteLaw>(&law)) {
    double acc = 0.0;
    for (std::size_t k = 0; k < d->values.size(); ++k) {
      acc += d->probs[k] * std::sqrt(d->values[k].at(0));
    }
    return acc;
  }
  return std::nullopt;
}

std::optional<double> expected_odf_impl(const RandomSetModel& model, Vec2 x) {
  switch (model.family) {
    case ShapeFamily::Singleton: {
      if (const auto* pm = std::get_if<PointMass>(&model.law)) {
        return dist(x, {pm->value.at(0), pm->value.at(1)});
      }
      if (const auto* d = std::get_if<DiscreteLaw>(&model.law)) {
        double acc = 0.0;
        for (std::size_t k = 0; k < d->values.size(); ++k) {
          acc += d->probs[k] * dist(x, {d->values[k].at(0), d->values[k].at(1)});
        }
        return acc;
      }
      return std::nullopt;
    }
    case ShapeFamily::Ball:
      // b is affine in the radius, so E[b] = |x - c| - E[Theta] exactly.
      return dist(x, model.center) - law_mean(model.law).at(0);
    case ShapeFamily::BallSqrtRadius: {
      const auto ms = mean_sqrt(model.law);
      if (!ms) return std::nullopt;
      return dist(x, model.center) - *ms;
    }
    case ShapeFamily::HalfPlane:
      return x.x - law_mean(model.law).at(0);
    case ShapeFamily::UpperHalfPlane: {
      if (const auto* pm = std::get_if<PointMass>(&model.law)) {
        return odf_closed_form({UpperHalfPlane{pm->value.at(0)}}, x);
      }
      if (const auto* u = std::get_if<UniformLaw>(&model.law)) {
        const double a = u->a.at(0), b = u->b.at(0);
        const double mid = 0.5 * (a + b);
        const double factor = 2.0 / (b - a) * std::sin(0.5 * (b - a));
        return factor * (x.x * std::sin(mid) - x.y * std::cos(mid));
      }
      if (const auto* d = std::get_if<DiscreteLaw>(&model.law)) {
        double acc = 0.0;
        for (std::size_t k = 0; k < d->values.size(); ++k) {
          acc += d->probs[k] * odf_closed_form({UpperHalfPlane{d->values[k].at(0)}}, x);
        }
        return acc;
      }
      return std::nullopt;
    }
    case ShapeFamily::FlashingDisc: {
      const double p = std::get<BernoulliLaw>(model.law).p;
      return p * norm(x) + (1.0 - p) * dist(x, model.alt_center) - model.radius;
    }
    case ShapeFamily::SlabOrBoundary: {
      // p is the probability of observing the boundary.
      const double p = std::get<BernoulliLaw>(model.law).p;
      const double b = slab_odf({model.slab_lo, model.slab_hi}, x.x);
      return b >= 0.0 ? b : (1.0 - 2.0 * p) * b;
    }
  }
  return std::nullopt;
}

}  // namespace

bool has_expected_closed_form(const RandomSetModel& model) {
  return expected_odf_impl(model, {0.0, 0.0}).has_value();
}

double expected_odf_closed_form(const RandomSetModel& model, Vec2 x) {
  const auto v = expected_odf_impl(model, x);
  if (!v) {
    throw NoClosedFormError("expected_odf_closed_form: no cataloged closed form for " +
                            family_name(model.family));
  }
  return *v;
}

ScalarField rasterize_expected_odf(const RandomSetModel& model, const GridSpec& grid) {
  std::vector<double> values(grid.size());
  for (int i = 0; i < grid.rows(); ++i) {
    for (int j = 0; j < grid.cols(); ++j) {
      values[static_cast<std::size_t>(i) * grid.cols() + j] =
          expected_odf_closed_form(model, grid.cell_center(i, j));
    }
  }
  return ScalarField(grid, std::move(values));
}

}  // namespace odfset
