#pragma once

#include <array>
#include <vector>

#include "ringflow/geometry.hpp"

namespace ringflow::detail {

/// Delaunay triangulation of a planar point set (incremental
/// Bowyer-Watson with a super-triangle). Points must be pairwise
/// distinct. Returns CCW triangles as index triples into `points`.
std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Vec2>& points);

} // namespace ringflow::detail
