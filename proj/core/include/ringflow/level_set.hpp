#pragma once

#include <vector>

#include "ringflow/field.hpp"

namespace ringflow {

/// Extracts the level set {u = c} as closed CCW polylines by linear
/// interpolation on mesh edges. Throws DomainError when c is outside
/// (0,1) or the level set is empty on this mesh.
std::vector<std::vector<Vec2>> extract_level_loops(const ScalarField& field, double c);

/// Removes vertices that deviate less than `tol` from the local chord
/// (closed-loop Douglas-Peucker, anchored at extreme points).
std::vector<Vec2> simplify_closed_polyline(const std::vector<Vec2>& loop, double tol);

/// Total length of a closed polyline.
double closed_polyline_length(const std::vector<Vec2>& loop);

} // namespace ringflow
