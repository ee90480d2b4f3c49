#include "odfset/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>

namespace odfset {
namespace {

// Edge of the dual lattice between adjacent cell centers. horiz: from node
// (i, j) to (i, j+1); vertical: from (i, j) to (i+1, j).
struct EdgeKey {
  int i;
  int j;
  bool horiz;
  auto operator<=>(const EdgeKey&) const = default;
};

struct Segment {
  EdgeKey a;
  EdgeKey b;
  Vec2 pa;
  Vec2 pb;
};

int sign_class(double v, double tol) {
  if (std::abs(v) <= tol) return 0;
  return v < 0.0 ? -1 : 1;
}

// Boundary loops of the union of cell-area squares of plateau nodes.
// Corners live on the lattice origin + spacing * (j', i'); directed edges keep
// the plateau region on the left, so walks close into oriented loops.
void plateau_loops(const ScalarField& field, const std::vector<int>& sgn,
                   std::vector<Polyline>& out) {
  const auto& g = field.grid();
  const int rows = g.rows(), cols = g.cols();
  auto zero_at = [&](int i, int j) {
    return i >= 0 && i < rows && j >= 0 && j < cols &&
           sgn[static_cast<std::size_t>(i) * cols + j] == 0;
  };
  // Directed edges between corner lattice points, keyed by source corner.
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges;
  auto add_edge = [&](int i0, int j0, int i1, int j1) {
    edges[{i0, j0}].push_back({i1, j1});
  };
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (!zero_at(i, j)) continue;
      if (!zero_at(i, j - 1)) add_edge(i + 1, j, i, j);      // left side
      if (!zero_at(i, j + 1)) add_edge(i, j + 1, i + 1, j + 1);  // right side
      if (!zero_at(i - 1, j)) add_edge(i, j, i, j + 1);      // top side
      if (!zero_at(i + 1, j)) add_edge(i + 1, j + 1, i + 1, j);  // bottom side
    }
  }
  auto corner_pos = [&](std::pair<int, int> c) -> Vec2 {
    return {g.origin().x + g.spacing() * c.second,
            g.origin().y + g.spacing() * c.first};
  };
  while (!edges.empty()) {
    auto it = edges.begin();
    const std::pair<int, int> start = it->first;
    Polyline loop;
    loop.closed = true;
    std::pair<int, int> cur = start;
    do {
      loop.points.push_back(corner_pos(cur));
      auto eit = edges.find(cur);
      if (eit == edges.end() || eit->second.empty()) break;  // pinched; bail out
      std::pair<int, int> next = eit->second.back();
      eit->second.pop_back();
      if (eit->second.empty()) edges.erase(eit);
      cur = next;
    } while (cur != start);
    if (loop.points.size() >= 3) out.push_back(std::move(loop));
  }
}

Vec2 edge_point(const ScalarField& field, const EdgeKey& e) {
  const auto& g = field.grid();
  const double v0 = field.at(e.i, e.j);
  const double v1 = e.horiz ? field.at(e.i, e.j + 1) : field.at(e.i + 1, e.j);
  double t = v0 / (v0 - v1);
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 c = g.cell_center(e.i, e.j);
  if (e.horiz) return {c.x + t * g.spacing(), c.y};
  return {c.x, c.y + t * g.spacing()};
}

}  // namespace

double interpolate_field(const ScalarField& field, Vec2 p) {
  const auto& g = field.grid();
  const double fx = (p.x - g.origin().x) / g.spacing() - 0.5;
  const double fy = (p.y - g.origin().y) / g.spacing() - 0.5;
  const double cx = std::clamp(fx, 0.0, static_cast<double>(g.cols() - 1));
  const double cy = std::clamp(fy, 0.0, static_cast<double>(g.rows() - 1));
  const int j0 = std::min(static_cast<int>(cx), g.cols() - 2 >= 0 ? g.cols() - 2 : 0);
  const int i0 = std::min(static_cast<int>(cy), g.rows() - 2 >= 0 ? g.rows() - 2 : 0);
  const int j1 = std::min(j0 + 1, g.cols() - 1);
  const int i1 = std::min(i0 + 1, g.rows() - 1);
  const double tx = cx - j0;
  const double ty = cy - i0;
  const double v00 = field.at(i0, j0), v01 = field.at(i0, j1);
  const double v10 = field.at(i1, j0), v11 = field.at(i1, j1);
  return (1 - ty) * ((1 - tx) * v00 + tx * v01) + ty * ((1 - tx) * v10 + tx * v11);
}

std::vector<Polyline> zero_isocontour(const ScalarField& field, double tolerance) {
  field.check_finite();
  const auto& g = field.grid();
  const int rows = g.rows(), cols = g.cols();
  std::vector<int> sgn(g.size());
  bool has_zero = false;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int s = sign_class(field.at(i, j), tolerance);
      sgn[static_cast<std::size_t>(i) * cols + j] = s;
      has_zero = has_zero || s == 0;
    }
  }

  std::vector<Polyline> result;
  if (has_zero) plateau_loops(field, sgn, result);

  // Marching squares over dual cells; plateau cells carry no line segments.
  std::vector<Segment> segments;
  auto inside = [&](int i, int j) { return field.at(i, j) < 0.0; };
  for (int i = 0; i + 1 < rows; ++i) {
    for (int j = 0; j + 1 < cols; ++j) {
      const std::size_t k00 = static_cast<std::size_t>(i) * cols + j;
      if (sgn[k00] == 0 && sgn[k00 + 1] == 0 && sgn[k00 + cols] == 0 &&
          sgn[k00 + cols + 1] == 0) {
        continue;
      }
      const bool b00 = inside(i, j), b01 = inside(i, j + 1);
      const bool b10 = inside(i + 1, j), b11 = inside(i + 1, j + 1);
      const int code = (b00 ? 1 : 0) | (b01 ? 2 : 0) | (b11 ? 4 : 0) | (b10 ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const EdgeKey top{i, j, true};
      const EdgeKey bottom{i + 1, j, true};
      const EdgeKey left{i, j, false};
      const EdgeKey right{i, j + 1, false};
      auto emit = [&](EdgeKey a, EdgeKey b) {
        segments.push_back({a, b, edge_point(field, a), edge_point(field, b)});
      };
      switch (code) {
        case 1: case 14: emit(top, left); break;
        case 2: case 13: emit(top, right); break;
        case 3: case 12: emit(left, right); break;
        case 4: case 11: emit(right, bottom); break;
        case 6: case 9: emit(top, bottom); break;
        case 7: case 8: emit(left, bottom); break;
        case 5: case 10: {
          // Saddle: resolve with the cell-center average.
          const double c = 0.25 * (field.at(i, j) + field.at(i, j + 1) +
                                   field.at(i + 1, j) + field.at(i + 1, j + 1));
          const bool center_in = c < 0.0;
          if ((code == 5) == center_in) {
            emit(top, right);
            emit(left, bottom);
          } else {
            emit(top, left);
            emit(right, bottom);
          }
          break;
        }
        default: break;
      }
    }
  }

  // Stitch segments into chains by shared dual edges.
  std::multimap<EdgeKey, std::size_t> by_edge;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    by_edge.insert({segments[s].a, s});
    by_edge.insert({segments[s].b, s});
  }
  std::vector<bool> used(segments.size(), false);
  auto degree = [&](const EdgeKey& e) { return by_edge.count(e); };
  auto take_next = [&](const EdgeKey& e, std::size_t self) -> std::int64_t {
    auto [lo, hi] = by_edge.equal_range(e);
    for (auto it = lo; it != hi; ++it) {
      if (it->second != self && !used[it->second]) return static_cast<std::int64_t>(it->second);
    }
    return -1;
  };
  auto walk = [&](std::size_t start, bool from_a) {
    Polyline line;
    std::size_t s = start;
    EdgeKey enter = from_a ? segments[s].a : segments[s].b;
    line.points.push_back(from_a ? segments[s].pa : segments[s].pb);
    while (true) {
      used[s] = true;
      const EdgeKey exit = (segments[s].a == enter) ? segments[s].b : segments[s].a;
      const Vec2 p = (segments[s].a == enter) ? segments[s].pb : segments[s].pa;
      line.points.push_back(p);
      const std::int64_t next = take_next(exit, s);
      if (next < 0) break;
      s = static_cast<std::size_t>(next);
      enter = exit;
    }
    return line;
  };
  auto finalize = [&](Polyline line) {
    // Drop zero-length steps introduced by vertices pinned to nodes.
    std::vector<Vec2> pts;
    for (const Vec2& p : line.points) {
      if (pts.empty() || pts.back().x != p.x || pts.back().y != p.y) pts.push_back(p);
    }
    if (pts.size() >= 3 && pts.front().x == pts.back().x &&
        pts.front().y == pts.back().y) {
      pts.pop_back();
      line.closed = true;
    }
    line.points = std::move(pts);
    if (line.points.size() >= 2) result.push_back(std::move(line));
  };
  // Open chains first: start from edges met by exactly one segment.
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    if (degree(segments[s].a) == 1) {
      finalize(walk(s, true));
    } else if (degree(segments[s].b) == 1) {
      finalize(walk(s, false));
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) finalize(walk(s, true));
  }
  return result;
}

}  // namespace odfset
