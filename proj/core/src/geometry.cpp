#include "ringflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ringflow {

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 v) { return std::hypot(v.x, v.y); }
double dist(Vec2 a, Vec2 b) { return norm(a - b); }
Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

Vec2 normalized(Vec2 v) {
  double n = norm(v);
  if (n == 0.0) return {0, 0};
  return v / n;
}

Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = dot(ab, ab);
  if (len2 == 0.0) return a;
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + ab * t;
}

double point_segment_dist(Vec2 p, Vec2 a, Vec2 b) {
  return dist(p, closest_point_on_segment(p, a, b));
}

static bool segments_properly_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  double d1 = cross(b - a, c - a);
  double d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c);
  double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double segment_segment_dist(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  if (segments_properly_intersect(a, b, c, d)) return 0.0;
  double m = point_segment_dist(a, c, d);
  m = std::min(m, point_segment_dist(b, c, d));
  m = std::min(m, point_segment_dist(c, a, b));
  m = std::min(m, point_segment_dist(d, a, b));
  return m;
}

static bool all_finite(const ConvexRegion& r) {
  auto ok = [](Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); };
  if (!ok(r.center) || !std::isfinite(r.radius)) return false;
  for (Vec2 v : r.vertices)
    if (!ok(v)) return false;
  return true;
}

ConvexRegion ConvexRegion::make_polygon(std::vector<Vec2> verts) {
  ConvexRegion r;
  r.kind = RegionKind::polygon;
  r.vertices = std::move(verts);
  return r;
}

ConvexRegion ConvexRegion::make_disk(Vec2 center, double radius) {
  ConvexRegion r;
  r.kind = RegionKind::disk;
  r.center = center;
  r.radius = radius;
  return r;
}

ConvexRegion ConvexRegion::make_point(Vec2 location) {
  ConvexRegion r;
  r.kind = RegionKind::point;
  r.center = location;
  return r;
}

Vec2 ConvexRegion::centroid() const {
  if (kind != RegionKind::polygon) return center;
  Vec2 c{0, 0};
  for (Vec2 v : vertices) c += v;
  return c / static_cast<double>(vertices.size());
}

bool ConvexRegion::contains(Vec2 p, double tol) const {
  switch (kind) {
    case RegionKind::point:
      return dist(p, center) <= tol;
    case RegionKind::disk:
      return dist(p, center) <= radius + tol;
    case RegionKind::polygon: {
      size_t n = vertices.size();
      for (size_t i = 0; i < n; ++i) {
        Vec2 a = vertices[i], b = vertices[(i + 1) % n];
        // CCW polygon: interior is to the left of every edge.
        if (cross(b - a, p - a) < -tol * norm(b - a)) return false;
      }
      return true;
    }
  }
  return false;
}

double ConvexRegion::boundary_dist(Vec2 p) const {
  switch (kind) {
    case RegionKind::point:
      return dist(p, center);
    case RegionKind::disk:
      return std::abs(dist(p, center) - radius);
    case RegionKind::polygon: {
      double m = std::numeric_limits<double>::infinity();
      size_t n = vertices.size();
      for (size_t i = 0; i < n; ++i)
        m = std::min(m, point_segment_dist(p, vertices[i], vertices[(i + 1) % n]));
      return m;
    }
  }
  return 0.0;
}

double ConvexRegion::set_dist(Vec2 p) const {
  if (contains(p)) return 0.0;
  if (kind == RegionKind::disk) return dist(p, center) - radius;
  return boundary_dist(p);
}

ConvexRegion ConvexRegion::scaled_about(Vec2 pivot, double factor) const {
  ConvexRegion r = *this;
  r.center = pivot + (center - pivot) * factor;
  r.radius = radius * factor;
  for (Vec2& v : r.vertices) v = pivot + (v - pivot) * factor;
  return r;
}

double ConvexRegion::perimeter() const {
  switch (kind) {
    case RegionKind::point:
      return 0.0;
    case RegionKind::disk:
      return 2.0 * std::numbers::pi * radius;
    case RegionKind::polygon: {
      double s = 0;
      size_t n = vertices.size();
      for (size_t i = 0; i < n; ++i) s += dist(vertices[i], vertices[(i + 1) % n]);
      return s;
    }
  }
  return 0.0;
}

Vec2 ConvexRegion::inward_normal_near(Vec2 p) const {
  switch (kind) {
    case RegionKind::point:
      return normalized(center - p);
    case RegionKind::disk:
      return normalized(center - p);
    case RegionKind::polygon: {
      size_t n = vertices.size();
      size_t best = 0;
      double best_d = std::numeric_limits<double>::max();
      for (size_t i = 0; i < n; ++i) {
        double d = point_segment_dist(p, vertices[i], vertices[(i + 1) % n]);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      // CCW polygon: the interior lies to the left of each edge.
      return perp(normalized(vertices[(best + 1) % n] - vertices[best]));
    }
  }
  return {0, 0};
}

bool validate_convex(const ConvexRegion& region) {
  if (!all_finite(region)) throw ValidationError("region has non-finite coordinates");
  switch (region.kind) {
    case RegionKind::point:
      if (!region.vertices.empty())
        throw ValidationError("point region must not carry vertices");
      return true;
    case RegionKind::disk:
      if (region.radius < 0.0) throw ValidationError("disk radius is negative");
      return true;
    case RegionKind::polygon: {
      if (region.vertices.size() < 3)
        throw ValidationError("polygon needs at least 3 vertices");
      size_t n = region.vertices.size();
      for (size_t i = 0; i < n; ++i) {
        Vec2 a = region.vertices[i];
        Vec2 b = region.vertices[(i + 1) % n];
        Vec2 c = region.vertices[(i + 2) % n];
        // Strict convexity: all turns share the same strict sign (CCW).
        if (cross(b - a, c - b) <= 0.0) return false;
      }
      return true;
    }
  }
  return false;
}

double dist_between(const ConvexRegion& a, const ConvexRegion& b) {
  if (!validate_convex(a) || !validate_convex(b))
    throw ValidationError("dist_between requires valid convex regions");

  auto boundary_to_set = [](const ConvexRegion& from, const ConvexRegion& to) {
    double best = std::numeric_limits<double>::infinity();
    switch (from.kind) {
      case RegionKind::point:
        return to.set_dist(from.center);
      case RegionKind::disk: {
        // Nearest boundary point of the disk toward the other set.
        switch (to.kind) {
          case RegionKind::point:
          case RegionKind::disk:
            return std::max(
                0.0, std::abs(dist(from.center, to.center) - from.radius) - to.radius);
          case RegionKind::polygon: {
            size_t n = to.vertices.size();
            for (size_t i = 0; i < n; ++i) {
              double d = point_segment_dist(from.center, to.vertices[i],
                                            to.vertices[(i + 1) % n]);
              best = std::min(best, std::abs(d - from.radius));
            }
            return best;
          }
        }
        return best;
      }
      case RegionKind::polygon: {
        size_t n = from.vertices.size();
        for (size_t i = 0; i < n; ++i) {
          Vec2 p = from.vertices[i], q = from.vertices[(i + 1) % n];
          switch (to.kind) {
            case RegionKind::point:
              best = std::min(best, point_segment_dist(to.center, p, q));
              break;
            case RegionKind::disk:
              best = std::min(
                  best, std::max(0.0, point_segment_dist(to.center, p, q) - to.radius));
              break;
            case RegionKind::polygon: {
              size_t m = to.vertices.size();
              for (size_t j = 0; j < m; ++j)
                best = std::min(best, segment_segment_dist(p, q, to.vertices[j],
                                                           to.vertices[(j + 1) % m]));
              break;
            }
          }
        }
        return best;
      }
    }
    return best;
  };

  return boundary_to_set(a, b);
}

ConvexRegion ConvexRing::meshed_inner() const {
  if (inner.kind == RegionKind::point)
    return ConvexRegion::make_disk(inner.center, eps_k);
  return inner;
}

static bool strictly_inside(const ConvexRegion& inner, const ConvexRegion& omega) {
  switch (inner.kind) {
    case RegionKind::point:
      return omega.contains(inner.center) && omega.boundary_dist(inner.center) > 0;
    case RegionKind::disk:
      return omega.contains(inner.center) &&
             omega.boundary_dist(inner.center) > inner.radius;
    case RegionKind::polygon:
      for (Vec2 v : inner.vertices) {
        if (!omega.contains(v) || omega.boundary_dist(v) <= 0) return false;
      }
      return true;
  }
  return false;
}

ConvexRing normalize_ring(const ConvexRegion& omega, const ConvexRegion& inner,
                          double eps_k) {
  if (!validate_convex(omega) || !validate_convex(inner))
    throw ValidationError("normalize_ring requires valid convex regions");
  if (omega.kind == RegionKind::point)
    throw ValidationError("outer region cannot be a point");
  if (eps_k <= 0.0) throw ValidationError("eps_k must be positive");

  if (!strictly_inside(inner, omega)) {
    // Distinguish "touching" from "outside" for the error report.
    bool touches = true;
    if (inner.kind == RegionKind::polygon) {
      for (Vec2 v : inner.vertices) touches = touches && omega.contains(v, 1e-12);
    } else {
      touches = omega.contains(inner.center, 1e-12);
    }
    if (touches)
      throw DegenerateGapError("inner region touches the outer boundary");
    throw ContainmentError("inner region is not inside the outer one");
  }

  double gap = dist_between(omega, inner);
  if (gap <= 0.0) throw DegenerateGapError("ring gap is not positive");

  double factor = 1.0 / gap;
  Vec2 pivot = inner.centroid();

  ConvexRing ring;
  ring.omega = omega.scaled_about(pivot, factor);
  ring.inner = inner.scaled_about(pivot, factor);
  ring.scale = factor;
  ring.eps_k = eps_k;
  return ring;
}

BoundaryParam::BoundaryParam(const ConvexRegion& region) : kind_(region.kind) {
  if (!validate_convex(region))
    throw ValidationError("boundary parameterization of a non-convex region");
  if (region.kind == RegionKind::point)
    throw DomainError("a point has no boundary to parameterize");

  if (region.kind == RegionKind::polygon) {
    size_t n = region.vertices.size();
    double s = 0;
    for (size_t i = 0; i < n; ++i) {
      Vec2 a = region.vertices[i], b = region.vertices[(i + 1) % n];
      BoundarySegment seg;
      seg.a = a;
      seg.b = b;
      seg.s_begin = s;
      s += dist(a, b);
      seg.s_end = s;
      vertex_params_.push_back(seg.s_begin);
      segments_.push_back(seg);
    }
    total_ = s;
  } else {
    center_ = region.center;
    radius_ = region.radius;
    total_ = 2.0 * std::numbers::pi * radius_;
    // Four arcs, purely descriptive; point_at works from angles.
    for (int i = 0; i < 4; ++i) {
      BoundarySegment seg;
      seg.is_arc = true;
      seg.angle_begin = 0.5 * std::numbers::pi * i;
      seg.angle_end = 0.5 * std::numbers::pi * (i + 1);
      seg.s_begin = total_ * i / 4.0;
      seg.s_end = total_ * (i + 1) / 4.0;
      seg.a = center_ + Vec2{radius_ * std::cos(seg.angle_begin),
                             radius_ * std::sin(seg.angle_begin)};
      seg.b = center_ + Vec2{radius_ * std::cos(seg.angle_end),
                             radius_ * std::sin(seg.angle_end)};
      segments_.push_back(seg);
    }
  }
}

Vec2 BoundaryParam::point_at(double s) const {
  s = std::fmod(s, total_);
  if (s < 0) s += total_;
  if (kind_ == RegionKind::disk) {
    double phi = s / radius_;
    return center_ + Vec2{radius_ * std::cos(phi), radius_ * std::sin(phi)};
  }
  for (const BoundarySegment& seg : segments_) {
    if (s <= seg.s_end || &seg == &segments_.back()) {
      double t = (s - seg.s_begin) / (seg.s_end - seg.s_begin);
      return seg.a + (seg.b - seg.a) * std::clamp(t, 0.0, 1.0);
    }
  }
  return segments_.back().b;
}

Vec2 BoundaryParam::inward_normal_at(double s) const {
  s = std::fmod(s, total_);
  if (s < 0) s += total_;
  if (kind_ == RegionKind::disk) {
    double phi = s / radius_;
    return {-std::cos(phi), -std::sin(phi)};
  }
  const double snap = 1e-12 * std::max(total_, 1.0);
  size_t n = segments_.size();
  for (size_t i = 0; i < n; ++i) {
    const BoundarySegment& seg = segments_[i];
    if (s > seg.s_end + snap) continue;
    // At a vertex the normal is the inward bisector of the two edges.
    if (std::abs(s - seg.s_begin) <= snap) {
      const BoundarySegment& prev = segments_[(i + n - 1) % n];
      Vec2 n1 = perp(normalized(prev.b - prev.a));
      Vec2 n2 = perp(normalized(seg.b - seg.a));
      return normalized(n1 + n2);
    }
    if (std::abs(s - seg.s_end) <= snap) {
      const BoundarySegment& next = segments_[(i + 1) % n];
      Vec2 n1 = perp(normalized(seg.b - seg.a));
      Vec2 n2 = perp(normalized(next.b - next.a));
      return normalized(n1 + n2);
    }
    return perp(normalized(seg.b - seg.a));
  }
  return perp(normalized(segments_.back().b - segments_.back().a));
}

ConvexRegion inscribed_polygon(const ConvexRegion& disk, int n_vertices) {
  if (disk.kind != RegionKind::disk)
    throw DomainError("inscribed_polygon expects a disk");
  if (n_vertices < 3) throw ValidationError("polygon needs at least 3 vertices");
  std::vector<Vec2> verts;
  verts.reserve(n_vertices);
  for (int i = 0; i < n_vertices; ++i) {
    double phi = 2.0 * std::numbers::pi * i / n_vertices;
    verts.push_back(disk.center +
                    Vec2{disk.radius * std::cos(phi), disk.radius * std::sin(phi)});
  }
  return ConvexRegion::make_polygon(std::move(verts));
}

} // namespace ringflow
