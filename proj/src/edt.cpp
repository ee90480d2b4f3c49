#include "odfset/edt.hpp"

#include <cmath>
#include <limits>

namespace odfset {
namespace {

constexpr std::int64_t kFar = std::int64_t{1} << 40;

// 1-D squared-distance transform: out[q] = min_p (q - p)^2 + f[p].
// Lower envelope of parabolas; boundary positions kept as exact rationals
// (num/den with den > 0) so the envelope is correct in integer arithmetic.
void envelope_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& out,
                 std::vector<int>& v, std::vector<std::int64_t>& zn,
                 std::vector<std::int64_t>& zd) {
  const int n = static_cast<int>(f.size());
  v.assign(n + 1, 0);
  zn.assign(n + 1, 0);
  zd.assign(n + 1, 1);
  int k = 0;
  v[0] = 0;
  zn[0] = std::numeric_limits<std::int64_t>::min() / 4;
  zd[0] = 1;
  for (int q = 1; q < n; ++q) {
    // Intersection of parabola q with parabola v[k]:
    //   s = (f[q] + q^2 - f[v] - v^2) / (2q - 2v)
    while (true) {
      const int p = v[k];
      const std::int64_t num =
          f[q] + std::int64_t{q} * q - f[p] - std::int64_t{p} * p;
      const std::int64_t den = 2 * std::int64_t{q - p};
      // Pop while s <= z[k], i.e. num * zd[k] <= zn[k] * den (den > 0).
      if (k > 0 && num * zd[k] <= zn[k] * den) {
        --k;
        continue;
      }
      ++k;
      v[k] = q;
      zn[k] = num;
      zd[k] = den;
      break;
    }
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    // Advance past boundaries left of q: z[j+1] < q  <=>  zn < q * zd.
    while (j < k && zn[j + 1] < std::int64_t{q} * zd[j + 1]) ++j;
    const std::int64_t d = std::int64_t{q} - v[j];
    out[q] = d * d + f[v[j]];
  }
}

}  // namespace

std::vector<std::int64_t> squared_distance_transform(const BinaryMask& mask) {
  if (!mask.any()) {
    throw EmptySetError("distance_transform: mask has no true cell");
  }
  const int rows = mask.grid().rows();
  const int cols = mask.grid().cols();
  std::vector<std::int64_t> d(mask.grid().size());
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      d[static_cast<std::size_t>(i) * cols + j] = mask.at(i, j) ? 0 : kFar;
    }
  }
  std::vector<std::int64_t> f, out;
  std::vector<int> v;
  std::vector<std::int64_t> zn, zd;
  // Pass along columns (within each row).
  f.resize(cols);
  out.resize(cols);
  for (int i = 0; i < rows; ++i) {
    auto* row = d.data() + static_cast<std::size_t>(i) * cols;
    for (int j = 0; j < cols; ++j) f[j] = row[j];
    envelope_1d(f, out, v, zn, zd);
    for (int j = 0; j < cols; ++j) row[j] = out[j];
  }
  // Pass along rows (within each column).
  f.resize(rows);
  out.resize(rows);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) f[i] = d[static_cast<std::size_t>(i) * cols + j];
    envelope_1d(f, out, v, zn, zd);
    for (int i = 0; i < rows; ++i) d[static_cast<std::size_t>(i) * cols + j] = out[i];
  }
  return d;
}

ScalarField distance_transform(const BinaryMask& mask) {
  const auto sq = squared_distance_transform(mask);
  const double h = mask.grid().spacing();
  std::vector<double> values(sq.size());
  for (std::size_t k = 0; k < sq.size(); ++k) {
    values[k] = h * std::sqrt(static_cast<double>(sq[k]));
  }
  return ScalarField(mask.grid(), std::move(values));
}

ScalarField oriented_distance_field(const BinaryMask& mask) {
  if (!mask.any() || mask.all()) {
    throw DegenerateSetError(
        "oriented_distance_field: mask must contain both true and false cells");
  }
  const auto d_in = squared_distance_transform(mask);
  const auto d_out = squared_distance_transform(complement(mask));
  const double h = mask.grid().spacing();
  const double half = 0.5 * h;
  std::vector<double> values(d_in.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (d_in[k] == 0) {
      values[k] = -(h * std::sqrt(static_cast<double>(d_out[k])) - half);
    } else {
      values[k] = h * std::sqrt(static_cast<double>(d_in[k])) - half;
    }
  }
  return ScalarField(mask.grid(), std::move(values));
}

ScalarField weighted_mean_fields(const std::vector<ScalarField>& fields,
                                 const std::vector<double>& weights) {
  if (fields.empty()) {
    throw BadWeightsError("weighted_mean_fields: no fields");
  }
  if (weights.size() != fields.size()) {
    throw BadWeightsError("weighted_mean_fields: one weight per field required");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw BadWeightsError("weighted_mean_fields: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw BadWeightsError("weighted_mean_fields: weights must sum to 1");
  }
  const GridSpec& grid = fields.front().grid();
  for (const auto& f : fields) require_same_grid(grid, f.grid(), "weighted_mean_fields");
  std::vector<double> values(grid.size(), 0.0);
  for (std::size_t fi = 0; fi < fields.size(); ++fi) {
    const auto& src = fields[fi].values();
    const double w = weights[fi];
    for (std::size_t k = 0; k < values.size(); ++k) values[k] += w * src[k];
  }
  return ScalarField(grid, std::move(values));
}

ScalarField mean_fields(const std::vector<ScalarField>& fields) {
  std::vector<double> weights(fields.size(),
                              fields.empty() ? 0.0 : 1.0 / fields.size());
  return weighted_mean_fields(fields, weights);
}

BinaryMask sublevel_mask(const ScalarField& field, double level) {
  std::vector<std::uint8_t> bits(field.values().size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    bits[k] = field.values()[k] <= level ? 1 : 0;
  }
  return BinaryMask(field.grid(), std::move(bits));
}

}  // namespace odfset
