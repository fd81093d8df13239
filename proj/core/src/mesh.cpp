#include "ringflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "delaunay.hpp"
#include "ringflow/errors.hpp"

namespace ringflow {

namespace {

// Deterministic jitter in [-1,1] from an integer pair.
double hash_unit(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a * 0x9E3779B97F4A7C15ull + b * 0xC2B2AE3D27D4EB4Full + 0x165667B1ull;
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return static_cast<double>(x >> 11) * (2.0 / 9007199254740992.0) - 1.0;
}

bool point_in_convex_loop(const std::vector<Vec2>& loop, Vec2 p) {
  size_t n = loop.size();
  for (size_t i = 0; i < n; ++i) {
    Vec2 a = loop[i], b = loop[(i + 1) % n];
    if (cross(b - a, p - a) < 0.0) return false;
  }
  return true;
}

std::vector<Vec2> sample_boundary(const ConvexRegion& region, double h, int n_min) {
  std::vector<Vec2> pts;
  if (region.kind == RegionKind::polygon) {
    size_t n = region.vertices.size();
    for (size_t i = 0; i < n; ++i) {
      Vec2 a = region.vertices[i], b = region.vertices[(i + 1) % n];
      int ne = std::max(1, static_cast<int>(std::lround(dist(a, b) / h)));
      for (int k = 0; k < ne; ++k)
        pts.push_back(a + (b - a) * (static_cast<double>(k) / ne));
    }
  } else {
    int ne = std::max(n_min,
                      static_cast<int>(std::ceil(region.perimeter() / h)));
    for (int k = 0; k < ne; ++k) {
      double phi = 2.0 * std::numbers::pi * k / ne;
      pts.push_back(region.center +
                    Vec2{region.radius * std::cos(phi), region.radius * std::sin(phi)});
    }
  }
  return pts;
}

double loop_spacing(const std::vector<Vec2>& loop) {
  double s = 0;
  for (size_t i = 0; i < loop.size(); ++i)
    s += dist(loop[i], loop[(i + 1) % loop.size()]);
  return s / static_cast<double>(loop.size());
}

} // namespace

Vec2 TriangleMesh::centroid_of(int t) const {
  auto [i, j, k] = triangles[t];
  return (vertices[i] + vertices[j] + vertices[k]) / 3.0;
}

std::array<double, 3> TriangleMesh::barycentric(int t, Vec2 p) const {
  auto [i, j, k] = triangles[t];
  Vec2 a = vertices[i], b = vertices[j], c = vertices[k];
  double den = cross(b - a, c - a);
  double l0 = cross(b - p, c - p) / den;
  double l1 = cross(c - p, a - p) / den;
  return {l0, l1, 1.0 - l0 - l1};
}

int TriangleMesh::walk(Vec2 p, int start) const {
  int t = start;
  for (int step = 0; step < 256 && t >= 0; ++step) {
    auto l = barycentric(t, p);
    int worst = 0;
    for (int i = 1; i < 3; ++i)
      if (l[i] < l[worst]) worst = i;
    if (l[worst] >= -1e-12) return t;
    t = neighbors[t][worst];
  }
  return -1;
}

int TriangleMesh::locate(Vec2 p, int hint) const {
  if (hint >= 0 && hint < triangle_count()) {
    int t = walk(p, hint);
    if (t >= 0) return t;
  }
  int cx = static_cast<int>((p.x - grid_origin_.x) / grid_cell_);
  int cy = static_cast<int>((p.y - grid_origin_.y) / grid_cell_);
  if (cx < 0 || cy < 0 || cx >= grid_nx_ || cy >= grid_ny_) return -1;
  for (int t : grid_cells_[cy * grid_nx_ + cx]) {
    auto l = barycentric(t, p);
    if (l[0] >= -1e-12 && l[1] >= -1e-12 && l[2] >= -1e-12) return t;
  }
  return -1;
}

int TriangleMesh::nearest_triangle(Vec2 p) const {
  int cx = std::clamp(static_cast<int>((p.x - grid_origin_.x) / grid_cell_), 0,
                      grid_nx_ - 1);
  int cy = std::clamp(static_cast<int>((p.y - grid_origin_.y) / grid_cell_), 0,
                      grid_ny_ - 1);
  int best = -1;
  double best_d = std::numeric_limits<double>::max();
  for (int ring = 0; ring < std::max(grid_nx_, grid_ny_); ++ring) {
    for (int y = cy - ring; y <= cy + ring; ++y) {
      for (int x = cx - ring; x <= cx + ring; ++x) {
        if (x < 0 || y < 0 || x >= grid_nx_ || y >= grid_ny_) continue;
        if (std::max(std::abs(x - cx), std::abs(y - cy)) != ring) continue;
        for (int t : grid_cells_[y * grid_nx_ + x]) {
          double d = dist(centroid_of(t), p);
          if (d < best_d) {
            best_d = d;
            best = t;
          }
        }
      }
    }
    if (best >= 0 && ring > 1) break;
  }
  return best;
}

double TriangleMesh::min_angle_deg() const {
  double worst = 180.0;
  for (const auto& tri : triangles) {
    for (int i = 0; i < 3; ++i) {
      Vec2 a = vertices[tri[i]];
      Vec2 b = vertices[tri[(i + 1) % 3]];
      Vec2 c = vertices[tri[(i + 2) % 3]];
      Vec2 u = b - a, v = c - a;
      double ang = std::atan2(std::abs(cross(u, v)), dot(u, v)) * 180.0 / std::numbers::pi;
      worst = std::min(worst, ang);
    }
  }
  return worst;
}

double TriangleMesh::min_area() const {
  double m = std::numeric_limits<double>::max();
  for (double a : areas) m = std::min(m, a);
  return m;
}

double TriangleMesh::inner_boundary_dist(Vec2 p) const {
  double m = std::numeric_limits<double>::max();
  size_t n = inner_loop.size();
  for (size_t i = 0; i < n; ++i)
    m = std::min(m, point_segment_dist(p, vertices[inner_loop[i]],
                                       vertices[inner_loop[(i + 1) % n]]));
  return m;
}

Vec2 TriangleMesh::project_to_inner(Vec2 p) const {
  double best = std::numeric_limits<double>::max();
  Vec2 q = p;
  size_t n = inner_loop.size();
  for (size_t i = 0; i < n; ++i) {
    Vec2 c = closest_point_on_segment(p, vertices[inner_loop[i]],
                                      vertices[inner_loop[(i + 1) % n]]);
    double d = dist(p, c);
    if (d < best) {
      best = d;
      q = c;
    }
  }
  return q;
}

double TriangleMesh::outer_boundary_dist(Vec2 p) const {
  double m = std::numeric_limits<double>::max();
  size_t n = outer_loop.size();
  for (size_t i = 0; i < n; ++i)
    m = std::min(m, point_segment_dist(p, vertices[outer_loop[i]],
                                       vertices[outer_loop[(i + 1) % n]]));
  return m;
}

void TriangleMesh::rebuild_derived() {
  int nv = vertex_count();
  int nt = triangle_count();

  areas.assign(nt, 0.0);
  for (int t = 0; t < nt; ++t) {
    auto& tri = triangles[t];
    Vec2 a = vertices[tri[0]], b = vertices[tri[1]], c = vertices[tri[2]];
    double ar = 0.5 * cross(b - a, c - a);
    if (ar < 0) {
      std::swap(tri[1], tri[2]);
      ar = -ar;
    }
    areas[t] = ar;
  }

  vertex_triangles.assign(nv, {});
  for (int t = 0; t < nt; ++t)
    for (int v : triangles[t]) vertex_triangles[v].push_back(t);

  neighbors.assign(nt, {-1, -1, -1});
  std::map<std::pair<int, int>, std::pair<int, int>> edge_owner;
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      int a = triangles[t][(i + 1) % 3];
      int b = triangles[t][(i + 2) % 3];
      auto key = std::minmax(a, b);
      auto it = edge_owner.find(key);
      if (it == edge_owner.end()) {
        edge_owner[key] = {t, i};
      } else {
        neighbors[t][i] = it->second.first;
        neighbors[it->second.first][it->second.second] = t;
      }
    }
  }

  // Locator grid.
  Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec2 hi{-lo.x, -lo.y};
  for (Vec2 v : vertices) {
    lo.x = std::min(lo.x, v.x);
    lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
  }
  grid_cell_ = std::max(2.0 * h, 1e-6);
  grid_origin_ = lo - Vec2{grid_cell_, grid_cell_};
  grid_nx_ = static_cast<int>((hi.x - grid_origin_.x) / grid_cell_) + 2;
  grid_ny_ = static_cast<int>((hi.y - grid_origin_.y) / grid_cell_) + 2;
  grid_cells_.assign(static_cast<size_t>(grid_nx_) * grid_ny_, {});
  for (int t = 0; t < nt; ++t) {
    auto& tri = triangles[t];
    Vec2 tlo = vertices[tri[0]], thi = tlo;
    for (int k = 1; k < 3; ++k) {
      tlo.x = std::min(tlo.x, vertices[tri[k]].x);
      tlo.y = std::min(tlo.y, vertices[tri[k]].y);
      thi.x = std::max(thi.x, vertices[tri[k]].x);
      thi.y = std::max(thi.y, vertices[tri[k]].y);
    }
    int x0 = static_cast<int>((tlo.x - grid_origin_.x) / grid_cell_);
    int y0 = static_cast<int>((tlo.y - grid_origin_.y) / grid_cell_);
    int x1 = static_cast<int>((thi.x - grid_origin_.x) / grid_cell_);
    int y1 = static_cast<int>((thi.y - grid_origin_.y) / grid_cell_);
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        if (x >= 0 && y >= 0 && x < grid_nx_ && y < grid_ny_)
          grid_cells_[y * grid_nx_ + x].push_back(t);
  }
}

std::shared_ptr<const TriangleMesh> generate_mesh(const ConvexRing& ring, double h) {
  if (!(h > 0.0) || h >= 0.5)
    throw DomainError("mesh size h must lie in (0, 0.5)");

  const ConvexRegion& omega = ring.omega;
  ConvexRegion inner = ring.meshed_inner();

  double gap = dist_between(omega, inner);
  if (gap < 2.0 * h)
    throw ResolutionError("ring gap " + std::to_string(gap) +
                          " is under 2h; choose a smaller h");

  std::vector<Vec2> outer_pts = sample_boundary(omega, h, 12);
  std::vector<Vec2> inner_pts = sample_boundary(inner, h, 8);
  const int n_outer = static_cast<int>(outer_pts.size());
  const int n_inner = static_cast<int>(inner_pts.size());

  std::vector<Vec2> points = outer_pts;
  points.insert(points.end(), inner_pts.begin(), inner_pts.end());

  // One interior point near each outer polygon vertex. Without it the
  // corner cell has all vertices on the boundary and any field with
  // Dirichlet data is exactly constant there.
  std::vector<Vec2> corner_pts;
  if (omega.kind == RegionKind::polygon) {
    size_t nv = omega.vertices.size();
    for (size_t i = 0; i < nv; ++i) {
      Vec2 v = omega.vertices[i];
      Vec2 prev = omega.vertices[(i + nv - 1) % nv];
      Vec2 next = omega.vertices[(i + 1) % nv];
      Vec2 bis = normalized(perp(normalized(v - prev)) + perp(normalized(next - v)));
      double d = 0.7 * h;
      Vec2 p = v + bis * d;
      for (int k = 0; k < 8 && omega.boundary_dist(p) < 0.4 * h; ++k) {
        d += 0.15 * h;
        p = v + bis * d;
      }
      if (omega.contains(p) && inner.set_dist(p) > 0.4 * h) corner_pts.push_back(p);
    }
  }
  points.insert(points.end(), corner_pts.begin(), corner_pts.end());

  // Grading rings around a small inner disk so element size grows
  // gradually from the inner spacing up to h.
  double graded_radius = 0.0;
  double inner_spacing = loop_spacing(inner_pts);
  if (inner.kind == RegionKind::disk && inner_spacing < 0.72 * h) {
    double r = inner.radius;
    double s = inner_spacing;
    int ring_id = 0;
    while (true) {
      r += 0.85 * s;
      s = std::min(h, 1.45 * s);
      if (s >= 0.95 * h || r > inner.radius + 0.45 * gap) break;
      int n = std::max(8, static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / s)));
      double stagger = (ring_id % 2) ? 0.5 : 0.0;
      for (int k = 0; k < n; ++k) {
        double jit = 0.03 * hash_unit(ring_id + 101, k);
        double phi = 2.0 * std::numbers::pi * (k + stagger + jit) / n;
        points.push_back(inner.center + Vec2{r * std::cos(phi), r * std::sin(phi)});
      }
      graded_radius = r;
      ++ring_id;
    }
  }

  // Hexagonal interior lattice with a clearance band along boundaries.
  // The lattice frame is rotated so that no row runs parallel to the
  // axis-aligned edges common in ring domains; otherwise trajectories
  // along such edges resonate with the element pattern.
  Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Vec2 hi{-lo.x, -lo.y};
  for (Vec2 p : outer_pts) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  const double lattice_angle = std::numbers::pi / 12.0;
  const double cos_a = std::cos(lattice_angle), sin_a = std::sin(lattice_angle);
  const double row_dy = h * std::sqrt(3.0) / 2.0;
  const double clearance = 0.58 * h;
  const double span = 0.5 * std::hypot(hi.x - lo.x, hi.y - lo.y) + 2.0 * h;
  const Vec2 mid = (lo + hi) * 0.5;
  const long j1 = static_cast<long>(std::ceil(span / row_dy));
  const long i1 = static_cast<long>(std::ceil(span / h));
  for (long j = -j1; j <= j1; ++j) {
    double y = j * row_dy;
    double xoff = (j % 2 == 0) ? 0.0 : 0.5 * h;
    for (long i = -i1; i <= i1; ++i) {
      Vec2 q{i * h + xoff, y};
      q.x += 0.04 * h * hash_unit(static_cast<std::uint64_t>(i * 2654435761ll),
                                  static_cast<std::uint64_t>(j));
      q.y += 0.04 * h * hash_unit(static_cast<std::uint64_t>(j * 40503ll),
                                  static_cast<std::uint64_t>(i + 7));
      Vec2 p{mid.x + cos_a * q.x - sin_a * q.y, mid.y + sin_a * q.x + cos_a * q.y};
      if (!omega.contains(p) || omega.boundary_dist(p) < clearance) continue;
      if (inner.set_dist(p) < clearance) continue;
      if (graded_radius > 0.0 &&
          dist(p, inner.center) < graded_radius + 0.72 * h)
        continue;
      bool near_corner_pt = false;
      for (Vec2 c : corner_pts)
        if (dist(p, c) < 0.6 * h) near_corner_pt = true;
      if (near_corner_pt) continue;
      points.push_back(p);
    }
  }

  std::vector<Vec2> outer_loop_pts = outer_pts;
  std::vector<Vec2> inner_loop_pts = inner_pts;

  auto keep_triangle = [&](Vec2 centroid) {
    if (!point_in_convex_loop(outer_loop_pts, centroid)) return false;
    if (point_in_convex_loop(inner_loop_pts, centroid)) return false;
    return true;
  };

  auto triangulate_and_filter = [&](const std::vector<Vec2>& pts) {
    auto tris = detail::delaunay_triangulate(pts);
    std::vector<std::array<int, 3>> kept;
    kept.reserve(tris.size());
    for (auto& t : tris) {
      Vec2 c = (pts[t[0]] + pts[t[1]] + pts[t[2]]) / 3.0;
      if (keep_triangle(c)) kept.push_back(t);
    }
    return kept;
  };

  auto tris = triangulate_and_filter(points);

  // Laplace smoothing of interior vertices; the boundary and the
  // corner helper points stay pinned.
  const int n_boundary = n_outer + n_inner;
  const size_t n_pinned = n_boundary + corner_pts.size();
  for (int pass = 0; pass < 4; ++pass) {
    std::vector<Vec2> sum(points.size(), Vec2{0, 0});
    std::vector<int> cnt(points.size(), 0);
    for (auto& t : tris) {
      for (int i = 0; i < 3; ++i) {
        int a = t[i], b = t[(i + 1) % 3];
        sum[a] += points[b];
        sum[b] += points[a];
        cnt[a]++;
        cnt[b]++;
      }
    }
    for (size_t v = n_pinned; v < points.size(); ++v) {
      if (cnt[v] == 0) continue;
      Vec2 target = sum[v] / static_cast<double>(cnt[v]);
      Vec2 moved = points[v] + (target - points[v]) * 0.7;
      if (omega.contains(moved) && omega.boundary_dist(moved) > 0.3 * clearance &&
          inner.set_dist(moved) > 0.3 * clearance)
        points[v] = moved;
    }
    tris = triangulate_and_filter(points);
  }

  // Compact: drop unused points (lattice points that ended up outside).
  std::vector<int> remap(points.size(), -1);
  auto mesh = std::make_shared<TriangleMesh>();
  mesh->h = h;
  for (auto& t : tris)
    for (int v : t)
      if (remap[v] < 0) {
        remap[v] = 0;
      }
  int next = 0;
  for (size_t v = 0; v < points.size(); ++v) {
    if (remap[v] == 0) {
      remap[v] = next++;
      mesh->vertices.push_back(points[v]);
      if (v < static_cast<size_t>(n_outer))
        mesh->tags.push_back(VertexTag::outer);
      else if (v < static_cast<size_t>(n_boundary))
        mesh->tags.push_back(VertexTag::inner);
      else
        mesh->tags.push_back(VertexTag::interior);
    }
  }
  for (auto& t : tris)
    mesh->triangles.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});

  for (int v = 0; v < n_outer; ++v)
    if (remap[v] >= 0) mesh->outer_loop.push_back(remap[v]);
  for (int v = n_outer; v < n_boundary; ++v)
    if (remap[v] >= 0) mesh->inner_loop.push_back(remap[v]);
  if (mesh->outer_loop.size() != static_cast<size_t>(n_outer) ||
      mesh->inner_loop.size() != static_cast<size_t>(n_inner))
    throw ResolutionError("boundary sampling lost vertices; choose a smaller h");

  mesh->rebuild_derived();

  if (mesh->min_angle_deg() < 20.0)
    throw ResolutionError("mesh quality below the 20 degree angle floor");
  if (mesh->min_area() < 1e-3 * h * h)
    throw ResolutionError("mesh contains nearly degenerate triangles");

  return mesh;
}

} // namespace ringflow
