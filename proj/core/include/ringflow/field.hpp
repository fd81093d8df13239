#pragma once

#include <memory>
#include <vector>

#include "ringflow/mesh.hpp"

namespace ringflow {

struct SolveOptions {
  double tol = 1e-10;      // relative energy-gradient tolerance, in (0, 1e-4]
  int max_iterations = 50; // damped-Newton iterations per continuation stage
  double eps_reg = 1e-12;  // gradient-norm regularization in the energy
};

struct StageReport {
  double p = 0;
  int iterations = 0;
  double grad_norm = 0;           // residual at acceptance
  std::vector<double> energies;   // energy after every accepted step
  std::vector<double> residuals;  // gradient norm after every step
};

struct SolveReport {
  std::vector<StageReport> stages;
  bool converged = false;
  int total_iterations() const;
};

/// Nodal solution of the p-Dirichlet problem on a ring mesh: 0 on the
/// outer boundary, 1 on the inner one, energy-minimizing inside.
struct ScalarField {
  std::shared_ptr<const TriangleMesh> mesh;
  std::vector<double> values;
  double p = 0.0;
  SolveReport report;

  double min_value() const;
  double max_value() const;
};

/// Minimizes the discrete p-Dirichlet energy sum_T area * |grad u|^p by
/// continuation in p (p = 2 linear start, then doubling with warm
/// starts) and a damped Newton method on each stage. p must lie in
/// [2, 128]. Throws SolveError with the residual history on failure.
ScalarField solve_p_laplace(std::shared_ptr<const TriangleMesh> mesh, double p,
                            const SolveOptions& opts = {});

/// Runs the continuation ladder once, returning a field for every
/// requested exponent (ascending). Cheaper than separate solves.
std::vector<ScalarField> solve_p_sweep(std::shared_ptr<const TriangleMesh> mesh,
                                       const std::vector<double>& ps,
                                       const SolveOptions& opts = {});

/// Discrete energy of an arbitrary nodal field at exponent p.
double p_dirichlet_energy(const TriangleMesh& mesh, const std::vector<double>& values,
                          double p, double eps_reg = 0.0);

/// Piecewise-constant gradient per triangle plus an area-weighted
/// nodal recovery with the speed |grad u| at every vertex.
struct GradientField {
  std::shared_ptr<const TriangleMesh> mesh;
  std::vector<Vec2> triangle_gradient;
  std::vector<Vec2> vertex_gradient;
  std::vector<double> vertex_speed;
};

GradientField recover_gradient(const ScalarField& field);

/// Point evaluation of a solved field and its recovered gradient.
/// Positions slightly outside the mesh are clamped to the nearest
/// triangle, which extends the field continuously past the boundary.
class FieldSampler {
public:
  FieldSampler(const ScalarField& field, const GradientField& grad);

  double value(Vec2 p) const;
  Vec2 gradient(Vec2 p) const;
  /// Norm of the interpolated recovered gradient.
  double speed(Vec2 p) const;
  /// Interpolation of the nodal speed values (a scalar field).
  double nodal_speed(Vec2 p) const;
  bool inside(Vec2 p) const;
  const TriangleMesh& mesh() const { return *mesh_; }

private:
  int resolve(Vec2 p, std::array<double, 3>& bary) const;
  std::shared_ptr<const TriangleMesh> mesh_;
  const std::vector<double>& values_;
  const std::vector<Vec2>& vertex_gradient_;
  const std::vector<double>& vertex_speed_;
  mutable int hint_ = -1;
};

} // namespace ringflow
