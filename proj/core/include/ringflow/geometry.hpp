#pragma once

#include <cstddef>
#include <vector>

#include "ringflow/errors.hpp"

namespace ringflow {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 v);
double dist(Vec2 a, Vec2 b);
/// Counterclockwise rotation by 90 degrees.
Vec2 perp(Vec2 v);
Vec2 normalized(Vec2 v);

/// Distance from a point to a segment [a,b].
double point_segment_dist(Vec2 p, Vec2 a, Vec2 b);
/// Closest point on segment [a,b] to p.
Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b);
double segment_segment_dist(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

enum class RegionKind { polygon, disk, point };

/// A compact convex planar region: a strictly convex polygon (CCW),
/// a disk, or a single point (a degenerate region of zero area).
struct ConvexRegion {
  RegionKind kind = RegionKind::point;
  std::vector<Vec2> vertices; // polygon only, counterclockwise
  Vec2 center{};              // disk / point location
  double radius = 0.0;        // disk only

  static ConvexRegion make_polygon(std::vector<Vec2> verts);
  static ConvexRegion make_disk(Vec2 center, double radius);
  static ConvexRegion make_point(Vec2 location);

  /// Centroid of the region (vertex average weighting for polygons).
  Vec2 centroid() const;
  bool contains(Vec2 p, double tol = 0.0) const;
  /// Distance from p to the boundary curve of the region.
  double boundary_dist(Vec2 p) const;
  /// Distance from p to the region as a set (0 inside).
  double set_dist(Vec2 p) const;
  /// Uniform scaling about a fixed point.
  ConvexRegion scaled_about(Vec2 pivot, double factor) const;
  double perimeter() const;
  /// Unit normal at the boundary point closest to p, pointing into the
  /// region.
  Vec2 inward_normal_near(Vec2 p) const;
};

/// True iff the region satisfies its convexity/shape invariants.
/// Structurally malformed input (under 3 polygon vertices, negative
/// radius, non-finite coordinates) raises ValidationError instead.
bool validate_convex(const ConvexRegion& region);

/// Exact distance between the boundary of `a` and the set `b`.
double dist_between(const ConvexRegion& a, const ConvexRegion& b);

/// A convex ring G = omega \ inner, normalized so that
/// dist(boundary of omega, inner) == 1.
struct ConvexRing {
  ConvexRegion omega;
  ConvexRegion inner;
  double scale = 1.0;   // factor applied to reach the normalization
  double eps_k = 0.02;  // meshing radius used when inner is a point

  /// The inner region as meshed: the true region, or the regularizing
  /// disk of radius eps_k when the inner region is a point.
  ConvexRegion meshed_inner() const;
};

/// Scales the pair uniformly about the centroid of `inner` until the
/// gap becomes 1. Throws ContainmentError / DegenerateGapError when the
/// inner region is not strictly inside.
ConvexRing normalize_ring(const ConvexRegion& omega, const ConvexRegion& inner,
                          double eps_k = 0.02);

/// One edge or arc of a region boundary with its arclength span.
struct BoundarySegment {
  Vec2 a, b;          // endpoints (chord endpoints for arcs)
  double s_begin = 0; // cumulative arclength at segment start
  double s_end = 0;
  bool is_arc = false;
  double angle_begin = 0, angle_end = 0; // arcs only
};

/// Arclength parameterization of a region boundary. For polygons the
/// parameter starts at vertex 0; for disks at angle 0.
class BoundaryParam {
public:
  explicit BoundaryParam(const ConvexRegion& region);

  double total_length() const { return total_; }
  const std::vector<BoundarySegment>& segments() const { return segments_; }
  Vec2 point_at(double s) const;
  /// Unit normal pointing to the left of the traversal direction; for a
  /// CCW outer boundary this is the inward normal.
  Vec2 inward_normal_at(double s) const;
  /// Arclength positions of polygon vertices (empty for disks).
  const std::vector<double>& vertex_params() const { return vertex_params_; }
  RegionKind kind() const { return kind_; }

private:
  RegionKind kind_;
  Vec2 center_{};
  double radius_ = 0;
  double total_ = 0;
  std::vector<BoundarySegment> segments_;
  std::vector<double> vertex_params_;
};

/// Inscribed regular polygon approximating a disk; helper for treating
/// smooth convex bodies as high-resolution polygons.
ConvexRegion inscribed_polygon(const ConvexRegion& disk, int n_vertices);

} // namespace ringflow
