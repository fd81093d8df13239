#pragma once

#include <utility>
#include <vector>

#include "ringflow/field.hpp"

namespace ringflow {

/// Maximum of the area-normalized cotangent Laplacian over interior
/// vertices. Nonpositive for the continuum solution, so the return
/// value should stay below a small discretization tolerance.
double check_subharmonic(const ScalarField& field);

/// Convexity defect of the level curve {u = c}: the total absolute
/// turning of wrong-sign (reflex) angles along the extracted loop,
/// measured after noise simplification. Zero for convex levels.
/// `simplify_tol` < 0 picks the default 0.05 * h.
double check_level_convexity(const ScalarField& field, double c,
                             double simplify_tol = -1.0);

/// Margin of the uniform gradient bound on the sublevel set {u <= c}:
///   (1/(1-c))^(1/(p-2)) - max |grad u| on {u <= c}.
/// Nonnegative in the continuum (up to discretization slack).
double check_gradient_bound(const ScalarField& field, double c);

/// Oscillation moduli of the recovered speed over a common subregion:
/// for each field, max ||grad u|(x) - |grad u|(y)| over vertex pairs in
/// the region closer than delta.
struct ModulusTable {
  std::vector<std::pair<double, double>> p_and_modulus;
  double max_over_min() const;
};

ModulusTable equicontinuity_diagnostic(const std::vector<const ScalarField*>& fields,
                                       const std::vector<int>& region_vertices,
                                       double delta);

/// Gradient-difference and speed-variation integrals over a region
/// (triangles with all vertices in `region_vertices`):
///   first  = integral of |grad u_p - grad u_ref|^2
///   second = integral of |grad(|grad u_p|^2)|^2
std::pair<double, double> convergence_integrals(const ScalarField& field_p,
                                             const ScalarField& field_ref,
                                             const std::vector<int>& region_vertices);

/// Vertices with lo <= u <= hi; a convenient region builder.
std::vector<int> level_band_vertices(const ScalarField& field, double lo, double hi);

} // namespace ringflow
