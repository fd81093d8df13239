#include "ringflow/field_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "ringflow/errors.hpp"
#include "ringflow/level_set.hpp"

namespace ringflow {

double check_subharmonic(const ScalarField& field) {
  const TriangleMesh& mesh = *field.mesh;
  const std::vector<double>& u = field.values;
  std::vector<double> stiff_u(mesh.vertex_count(), 0.0);

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    auto& tri = mesh.triangles[t];
    Vec2 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    double two_a = cross(b - a, c - a);
    Vec2 g[3] = {perp(c - b) / two_a, perp(a - c) / two_a, perp(b - a) / two_a};
    double area = 0.5 * two_a;
    Vec2 q = g[0] * u[tri[0]] + g[1] * u[tri[1]] + g[2] * u[tri[2]];
    for (int v = 0; v < 3; ++v) stiff_u[tri[v]] += area * dot(q, g[v]);
  }

  // The cotangent-weighted row sum -(K u)_v equals the integral of the
  // Laplacian against the hat function at v, which the continuum
  // solution keeps nonpositive.
  double worst = -std::numeric_limits<double>::infinity();
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    if (mesh.tags[v] != VertexTag::interior) continue;
    worst = std::max(worst, -stiff_u[v]);
  }
  return worst;
}

double check_level_convexity(const ScalarField& field, double c, double simplify_tol) {
  auto loops = extract_level_loops(field, c);
  // Default simplification absorbs extraction wiggles one order below
  // the mesh scale, where level curves cross gradient creases.
  if (simplify_tol < 0) simplify_tol = 0.15 * field.mesh->h;

  double defect = 0;
  for (auto& raw : loops) {
    std::vector<Vec2> loop = simplify_closed_polyline(raw, simplify_tol);
    size_t n = loop.size();
    if (n < 4) continue;
    for (size_t i = 0; i < n; ++i) {
      Vec2 e0 = loop[i] - loop[(i + n - 1) % n];
      Vec2 e1 = loop[(i + 1) % n] - loop[i];
      double turn = std::atan2(cross(e0, e1), dot(e0, e1));
      if (turn < 0) defect += -turn;
    }
  }
  return defect;
}

double check_gradient_bound(const ScalarField& field, double c) {
  if (!(c > 0.0) || !(c < 1.0)) throw DomainError("c must lie strictly in (0,1)");
  if (!(field.p > 2.0)) throw DomainError("gradient bound needs p > 2");
  double bound = std::pow(1.0 / (1.0 - c), 1.0 / (field.p - 2.0));
  GradientField grad = recover_gradient(field);
  double max_speed = 0;
  for (int v = 0; v < field.mesh->vertex_count(); ++v)
    if (field.values[v] <= c) max_speed = std::max(max_speed, grad.vertex_speed[v]);
  return bound - max_speed;
}

double ModulusTable::max_over_min() const {
  double lo = std::numeric_limits<double>::max(), hi = 0;
  for (auto& [p, m] : p_and_modulus) {
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  if (lo <= 0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

ModulusTable equicontinuity_diagnostic(const std::vector<const ScalarField*>& fields,
                                       const std::vector<int>& region_vertices,
                                       double delta) {
  if (fields.empty()) throw DomainError("no fields given");
  if (!(delta > 0)) throw DomainError("delta must be positive");
  const TriangleMesh& mesh = *fields.front()->mesh;
  for (auto* f : fields)
    if (f->mesh.get() != &mesh) throw DomainError("fields must share one mesh");
  for (int v : region_vertices)
    if (mesh.tags[v] != VertexTag::interior)
      throw DomainError("subregion touches the boundary");

  // Bucket region vertices on a grid of cell size delta.
  std::unordered_map<long long, std::vector<int>> cells;
  auto cell_of = [&](Vec2 p) {
    long long cx = static_cast<long long>(std::floor(p.x / delta));
    long long cy = static_cast<long long>(std::floor(p.y / delta));
    return (cx << 24) ^ cy;
  };
  for (int v : region_vertices) cells[cell_of(mesh.vertices[v])].push_back(v);

  ModulusTable table;
  for (auto* f : fields) {
    GradientField grad = recover_gradient(*f);
    double modulus = 0;
    for (int v : region_vertices) {
      Vec2 p = mesh.vertices[v];
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          auto it = cells.find(cell_of({p.x + dx * delta, p.y + dy * delta}));
          if (it == cells.end()) continue;
          for (int w : it->second) {
            if (w <= v) continue;
            if (dist(p, mesh.vertices[w]) >= delta) continue;
            modulus = std::max(
                modulus, std::abs(grad.vertex_speed[v] - grad.vertex_speed[w]));
          }
        }
      }
    }
    table.p_and_modulus.emplace_back(f->p, modulus);
  }
  return table;
}

std::pair<double, double> convergence_integrals(const ScalarField& field_p,
                                             const ScalarField& field_ref,
                                             const std::vector<int>& region_vertices) {
  if (field_p.mesh != field_ref.mesh) throw DomainError("fields must share one mesh");
  const TriangleMesh& mesh = *field_p.mesh;

  std::vector<char> in_region(mesh.vertex_count(), 0);
  for (int v : region_vertices) in_region[v] = 1;

  GradientField gp = recover_gradient(field_p);
  GradientField gref = recover_gradient(field_ref);

  std::vector<double> w(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v)
    w[v] = gp.vertex_speed[v] * gp.vertex_speed[v];

  double integral_diff = 0, integral_osc = 0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    auto& tri = mesh.triangles[t];
    if (!in_region[tri[0]] || !in_region[tri[1]] || !in_region[tri[2]]) continue;
    Vec2 d = gp.triangle_gradient[t] - gref.triangle_gradient[t];
    integral_diff += mesh.areas[t] * dot(d, d);

    Vec2 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    double two_a = cross(b - a, c - a);
    Vec2 g[3] = {perp(c - b) / two_a, perp(a - c) / two_a, perp(b - a) / two_a};
    Vec2 gw = g[0] * w[tri[0]] + g[1] * w[tri[1]] + g[2] * w[tri[2]];
    integral_osc += mesh.areas[t] * dot(gw, gw);
  }
  return {integral_diff, integral_osc};
}

std::vector<int> level_band_vertices(const ScalarField& field, double lo, double hi) {
  std::vector<int> out;
  for (int v = 0; v < field.mesh->vertex_count(); ++v)
    if (field.values[v] >= lo && field.values[v] <= hi) out.push_back(v);
  return out;
}

} // namespace ringflow
