#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "ringflow/geometry.hpp"

namespace ringflow {

enum class VertexTag : std::uint8_t { interior, outer, inner };

/// Conforming triangulation of a convex ring. Boundary vertices sit
/// exactly on the outer and (possibly regularized) inner boundaries;
/// triangles are CCW with positive area.
struct TriangleMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<VertexTag> tags;
  double h = 0.0; // target edge length

  // Derived connectivity, filled by generate_mesh.
  std::vector<std::array<int, 3>> neighbors; // across edge opposite v[i]; -1 none
  std::vector<std::vector<int>> vertex_triangles;
  std::vector<double> areas;
  std::vector<int> outer_loop; // ordered CCW boundary vertex ids
  std::vector<int> inner_loop;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }

  Vec2 centroid_of(int t) const;
  std::array<double, 3> barycentric(int t, Vec2 p) const;
  /// Containing triangle id, or -1 when p is outside the mesh.
  int locate(Vec2 p, int hint = -1) const;
  /// Triangle to clamp against when p is slightly outside.
  int nearest_triangle(Vec2 p) const;

  double min_angle_deg() const;
  double min_area() const;

  double inner_boundary_dist(Vec2 p) const;
  Vec2 project_to_inner(Vec2 p) const;
  double outer_boundary_dist(Vec2 p) const;

  void rebuild_derived();

private:
  // Uniform bucket grid for point location.
  Vec2 grid_origin_{};
  double grid_cell_ = 0.0;
  int grid_nx_ = 0, grid_ny_ = 0;
  std::vector<std::vector<int>> grid_cells_;
  int walk(Vec2 p, int start) const;
};

/// Triangulates the closure of the ring at target edge length h
/// (0 < h < 0.5). Deterministic: identical inputs give identical
/// meshes. Throws ResolutionError when the ring gap is below 2h.
std::shared_ptr<const TriangleMesh> generate_mesh(const ConvexRing& ring, double h);

} // namespace ringflow
