#include "ringflow/level_set.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ringflow/errors.hpp"

namespace ringflow {

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return std::minmax(a, b); }

double loop_signed_area(const std::vector<Vec2>& loop) {
  double a = 0;
  for (size_t i = 0; i < loop.size(); ++i) {
    Vec2 p = loop[i], q = loop[(i + 1) % loop.size()];
    a += cross(p, q);
  }
  return 0.5 * a;
}

} // namespace

std::vector<std::vector<Vec2>> extract_level_loops(const ScalarField& field, double c) {
  if (!(c > 0.0) || !(c < 1.0))
    throw DomainError("level value must lie strictly between 0 and 1");
  const TriangleMesh& mesh = *field.mesh;
  const std::vector<double>& u = field.values;

  // Crossing point on each cut edge.
  std::map<EdgeKey, Vec2> cut_points;
  // Adjacency between cut edges induced by triangles.
  std::map<EdgeKey, std::vector<EdgeKey>> links;

  auto above = [&](int v) { return u[v] > c; };

  for (auto& tri : mesh.triangles) {
    EdgeKey cuts[3];
    int n_cuts = 0;
    for (int i = 0; i < 3 && n_cuts <= 2; ++i) {
      int a = tri[i], b = tri[(i + 1) % 3];
      if (above(a) == above(b)) continue;
      EdgeKey key = edge_key(a, b);
      if (!cut_points.count(key)) {
        double t = (c - u[a]) / (u[b] - u[a]);
        cut_points[key] = mesh.vertices[a] + (mesh.vertices[b] - mesh.vertices[a]) * t;
      }
      cuts[n_cuts++] = key;
    }
    if (n_cuts == 2) {
      links[cuts[0]].push_back(cuts[1]);
      links[cuts[1]].push_back(cuts[0]);
    }
  }

  if (cut_points.empty()) throw DomainError("level set is empty on this mesh");

  std::vector<std::vector<Vec2>> loops;
  std::map<EdgeKey, bool> used;
  for (auto& [start, nbrs] : links) {
    if (used[start] || nbrs.size() != 2) continue;
    std::vector<Vec2> loop;
    EdgeKey prev = start, cur = start;
    while (true) {
      used[cur] = true;
      loop.push_back(cut_points[cur]);
      auto& ln = links[cur];
      EdgeKey nxt = cur;
      bool found = false;
      for (EdgeKey cand : ln) {
        if (cand != prev && !used[cand]) {
          nxt = cand;
          found = true;
          break;
        }
      }
      if (!found) {
        // Either back at the start (closed) or a dead end (open chain).
        break;
      }
      prev = cur;
      cur = nxt;
    }
    if (loop.size() >= 3) {
      if (loop_signed_area(loop) < 0) std::reverse(loop.begin(), loop.end());
      loops.push_back(std::move(loop));
    }
  }

  if (loops.empty()) throw DomainError("level set has no closed component");
  return loops;
}

double closed_polyline_length(const std::vector<Vec2>& loop) {
  double s = 0;
  for (size_t i = 0; i < loop.size(); ++i) s += dist(loop[i], loop[(i + 1) % loop.size()]);
  return s;
}

namespace {

void dp_simplify(const std::vector<Vec2>& pts, size_t lo, size_t hi, double tol,
                 std::vector<char>& keep) {
  if (hi <= lo + 1) return;
  double worst = -1;
  size_t worst_i = lo;
  for (size_t i = lo + 1; i < hi; ++i) {
    double d = point_segment_dist(pts[i], pts[lo], pts[hi]);
    if (d > worst) {
      worst = d;
      worst_i = i;
    }
  }
  if (worst <= tol) return;
  keep[worst_i] = 1;
  dp_simplify(pts, lo, worst_i, tol, keep);
  dp_simplify(pts, worst_i, hi, tol, keep);
}

} // namespace

std::vector<Vec2> simplify_closed_polyline(const std::vector<Vec2>& loop, double tol) {
  size_t n = loop.size();
  if (n <= 4 || tol <= 0) return loop;
  // Anchor the split at the two horizontally extreme points.
  size_t a = 0, b = 0;
  for (size_t i = 1; i < n; ++i) {
    if (loop[i].x < loop[a].x) a = i;
    if (loop[i].x > loop[b].x) b = i;
  }
  if (a == b) return loop;
  std::vector<Vec2> rolled;
  rolled.reserve(n + 1);
  for (size_t i = 0; i <= n; ++i) rolled.push_back(loop[(a + i) % n]);
  size_t b_pos = (b + n - a) % n;
  if (rolled.size() < 3 || b_pos == 0) return loop;

  std::vector<char> keep(rolled.size(), 0);
  keep[0] = 1;
  keep[rolled.size() - 1] = 1;
  keep[b_pos] = 1;
  dp_simplify(rolled, 0, b_pos, tol, keep);
  dp_simplify(rolled, b_pos, rolled.size() - 1, tol, keep);

  std::vector<Vec2> out;
  for (size_t i = 0; i + 1 < rolled.size(); ++i)
    if (keep[i]) out.push_back(rolled[i]);
  return out;
}

} // namespace ringflow
