#include "ringflow/field.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "ringflow/errors.hpp"

namespace ringflow {

namespace {

struct TriBasis {
  Vec2 g[3];  // P1 basis gradients
  double area;
};

std::vector<TriBasis> basis_of(const TriangleMesh& mesh) {
  std::vector<TriBasis> out(mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    auto [i, j, k] = mesh.triangles[t];
    Vec2 a = mesh.vertices[i], b = mesh.vertices[j], c = mesh.vertices[k];
    double two_a = cross(b - a, c - a);
    out[t].area = 0.5 * two_a;
    out[t].g[0] = perp(c - b) / two_a;
    out[t].g[1] = perp(a - c) / two_a;
    out[t].g[2] = perp(b - a) / two_a;
  }
  return out;
}

Vec2 triangle_gradient(const TriangleMesh& mesh, const TriBasis& tb,
                       const std::vector<double>& u, int t) {
  auto& tri = mesh.triangles[t];
  Vec2 q{0, 0};
  for (int v = 0; v < 3; ++v) q += tb.g[v] * u[tri[v]];
  return q;
}

class PLaplaceProblem {
public:
  PLaplaceProblem(const TriangleMesh& mesh, const SolveOptions& opts)
      : mesh_(mesh), basis_(basis_of(mesh)), opts_(opts) {
    dof_.assign(mesh.vertex_count(), -1);
    int next = 0;
    for (int v = 0; v < mesh.vertex_count(); ++v)
      if (mesh.tags[v] == VertexTag::interior) {
        dof_[v] = next++;
        dof_vertex_.push_back(v);
      }
    n_free_ = next;
    build_pattern();
  }

  int n_free() const { return n_free_; }

  double energy(const std::vector<double>& u, double p) const {
    double e = 0;
    for (size_t t = 0; t < basis_.size(); ++t) {
      Vec2 q = triangle_gradient(mesh_, basis_[t], u, static_cast<int>(t));
      double s = dot(q, q) + opts_.eps_reg;
      e += basis_[t].area * std::pow(s, 0.5 * p);
    }
    return e;
  }

  void gradient(const std::vector<double>& u, double p, Eigen::VectorXd& g) const {
    g.setZero(n_free_);
    for (size_t t = 0; t < basis_.size(); ++t) {
      const TriBasis& tb = basis_[t];
      Vec2 q = triangle_gradient(mesh_, tb, u, static_cast<int>(t));
      double s = dot(q, q) + opts_.eps_reg;
      double w = tb.area * p * std::pow(s, 0.5 * p - 1.0);
      auto& tri = mesh_.triangles[t];
      for (int v = 0; v < 3; ++v) {
        int d = dof_[tri[v]];
        if (d >= 0) g[d] += w * dot(q, tb.g[v]);
      }
    }
  }

  void hessian(const std::vector<double>& u, double p,
               Eigen::SparseMatrix<double>& H) const {
    std::fill(H.valuePtr(), H.valuePtr() + H.nonZeros(), 0.0);
    for (size_t t = 0; t < basis_.size(); ++t) {
      const TriBasis& tb = basis_[t];
      Vec2 q = triangle_gradient(mesh_, tb, u, static_cast<int>(t));
      double s = dot(q, q) + opts_.eps_reg;
      double w1 = p * std::pow(s, 0.5 * p - 1.0);
      double w2 = p * (p - 2.0) * std::pow(s, 0.5 * p - 2.0);
      auto& tri = mesh_.triangles[t];
      for (int a = 0; a < 3; ++a) {
        int da = dof_[tri[a]];
        if (da < 0) continue;
        double qa = dot(q, tb.g[a]);
        for (int b = 0; b < 3; ++b) {
          int db = dof_[tri[b]];
          if (db < 0) continue;
          double val =
              tb.area * (w2 * qa * dot(q, tb.g[b]) + w1 * dot(tb.g[a], tb.g[b]));
          add_entry(H, da, db, val);
        }
      }
    }
  }

  // Plain stiffness used as the Levenberg stabilizer.
  void stiffness(Eigen::SparseMatrix<double>& K) const {
    std::fill(K.valuePtr(), K.valuePtr() + K.nonZeros(), 0.0);
    for (size_t t = 0; t < basis_.size(); ++t) {
      const TriBasis& tb = basis_[t];
      auto& tri = mesh_.triangles[t];
      for (int a = 0; a < 3; ++a) {
        int da = dof_[tri[a]];
        if (da < 0) continue;
        for (int b = 0; b < 3; ++b) {
          int db = dof_[tri[b]];
          if (db < 0) continue;
          add_entry(K, da, db, tb.area * dot(tb.g[a], tb.g[b]));
        }
      }
    }
  }

  Eigen::SparseMatrix<double> empty_matrix() const { return pattern_; }

  void apply_step(std::vector<double>& u, const Eigen::VectorXd& d,
                  double step) const {
    for (int v = 0; v < mesh_.vertex_count(); ++v)
      if (dof_[v] >= 0) u[v] += step * d[dof_[v]];
  }

  int vertex_of_dof(int d) const { return dof_vertex_[d]; }

  // Replace the listed vertices by the harmonic extension of their
  // surroundings (Gauss-Seidel on the plain stiffness). Used for
  // unknowns the large-p energy is indifferent to.
  void harmonic_fill(std::vector<double>& u, const std::vector<char>& fill_vertex) const {
    for (int sweep = 0; sweep < 200; ++sweep) {
      double change = 0;
      for (int v = 0; v < mesh_.vertex_count(); ++v) {
        if (!fill_vertex[v]) continue;
        double diag = 0, off = 0;
        for (int t : mesh_.vertex_triangles[v]) {
          const TriBasis& tb = basis_[t];
          auto& tri = mesh_.triangles[t];
          int local = tri[0] == v ? 0 : tri[1] == v ? 1 : 2;
          for (int w = 0; w < 3; ++w) {
            double k = tb.area * dot(tb.g[local], tb.g[w]);
            if (w == local)
              diag += k;
            else
              off += k * u[tri[w]];
          }
        }
        if (diag > 0) {
          double next = -off / diag;
          change = std::max(change, std::abs(next - u[v]));
          u[v] = next;
        }
      }
      if (change < 1e-14) break;
    }
  }

private:
  void build_pattern() {
    std::vector<Eigen::Triplet<double>> trips;
    for (auto& tri : mesh_.triangles) {
      for (int a = 0; a < 3; ++a) {
        int da = dof_[tri[a]];
        if (da < 0) continue;
        for (int b = 0; b < 3; ++b) {
          int db = dof_[tri[b]];
          if (db >= 0) trips.emplace_back(da, db, 0.0);
        }
      }
    }
    pattern_.resize(n_free_, n_free_);
    pattern_.setFromTriplets(trips.begin(), trips.end());
    pattern_.makeCompressed();
  }

  static void add_entry(Eigen::SparseMatrix<double>& M, int r, int c, double v) {
    M.coeffRef(r, c) += v;
  }

  const TriangleMesh& mesh_;
  std::vector<TriBasis> basis_;
  SolveOptions opts_;
  std::vector<int> dof_;
  std::vector<int> dof_vertex_;
  int n_free_ = 0;
  Eigen::SparseMatrix<double> pattern_;
};

std::vector<double> continuation_ladder(double target, const std::vector<double>& keep) {
  std::vector<double> ladder{2.0};
  size_t ki = 0;
  double cur = 2.0;
  while (cur < target - 1e-12) {
    double nxt = std::min(cur * 2.0, target);
    while (ki < keep.size() && keep[ki] <= cur + 1e-12) ++ki;
    if (ki < keep.size()) nxt = std::min(nxt, keep[ki]);
    ladder.push_back(nxt);
    cur = nxt;
  }
  return ladder;
}

} // namespace

int SolveReport::total_iterations() const {
  int n = 0;
  for (auto& s : stages) n += s.iterations;
  return n;
}

double ScalarField::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double ScalarField::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

double p_dirichlet_energy(const TriangleMesh& mesh, const std::vector<double>& values,
                          double p, double eps_reg) {
  double e = 0;
  auto basis = basis_of(mesh);
  for (size_t t = 0; t < basis.size(); ++t) {
    Vec2 q = triangle_gradient(mesh, basis[t], values, static_cast<int>(t));
    e += basis[t].area * std::pow(dot(q, q) + eps_reg, 0.5 * p);
  }
  return e;
}

static std::vector<ScalarField> solve_impl(std::shared_ptr<const TriangleMesh> mesh,
                                           const std::vector<double>& ps,
                                           const SolveOptions& opts) {
  if (!mesh) throw DomainError("solve needs a mesh");
  if (ps.empty()) throw ConfigError("empty exponent list");
  for (double p : ps)
    if (!(p >= 2.0) || p > 128.0)
      throw DomainError("exponent p must lie in [2, 128]");
  if (!std::is_sorted(ps.begin(), ps.end()))
    throw DomainError("exponent list must be ascending");
  if (!(opts.tol > 0.0) || opts.tol > 1e-4)
    throw DomainError("tolerance must lie in (0, 1e-4]");

  PLaplaceProblem prob(*mesh, opts);

  std::vector<double> u(mesh->vertex_count(), 0.0);
  for (int v = 0; v < mesh->vertex_count(); ++v)
    if (mesh->tags[v] == VertexTag::inner) u[v] = 1.0;

  Eigen::SparseMatrix<double> H = prob.empty_matrix();
  Eigen::SparseMatrix<double> K2 = prob.empty_matrix();
  prob.stiffness(K2);
  double k2_diag_max = 0.0;
  for (int i = 0; i < K2.outerSize(); ++i) k2_diag_max = std::max(k2_diag_max, K2.coeff(i, i));

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ldlt.analyzePattern(H);

  SolveReport report;
  report.converged = true;
  std::vector<ScalarField> out;
  std::vector<double> all_residuals;

  std::vector<double> ladder = continuation_ladder(ps.back(), ps);
  size_t want = 0;

  for (double p : ladder) {
    StageReport stage;
    stage.p = p;
    Eigen::VectorXd g(prob.n_free()), d(prob.n_free());
    double e = prob.energy(u, p);
    stage.energies.push_back(e);
    bool stage_ok = false;

    for (int it = 0; it < opts.max_iterations; ++it) {
      stage.iterations = it;
      prob.gradient(u, p, g);
      double gn = g.lpNorm<Eigen::Infinity>();
      stage.residuals.push_back(gn);
      all_residuals.push_back(gn);
      double scale = 1.0 + p * std::abs(e);
      if (gn <= opts.tol * scale) {
        stage.grad_norm = gn;
        stage_ok = true;
        break;
      }

      prob.hessian(u, p, H);
      double h_diag_max = 0.0;
      for (int i = 0; i < H.outerSize(); ++i)
        h_diag_max = std::max(h_diag_max, H.coeff(i, i));

      // At large p the energy density underflows where the gradient is
      // flat; those unknowns are indifferent, so they keep their
      // warm-start values instead of receiving garbage pivots.
      std::vector<char> frozen(prob.n_free(), 0);
      int n_frozen = 0;
      for (int i = 0; i < H.outerSize(); ++i)
        if (H.coeff(i, i) <= 1e-10 * h_diag_max) {
          frozen[i] = 1;
          ++n_frozen;
        }
      if (n_frozen > 0) {
        for (int col = 0; col < H.outerSize(); ++col) {
          for (Eigen::SparseMatrix<double>::InnerIterator it(H, col); it; ++it) {
            if (!frozen[it.row()] && !frozen[col]) continue;
            it.valueRef() = (it.row() == col) ? h_diag_max : 0.0;
          }
        }
        for (int i = 0; i < prob.n_free(); ++i)
          if (frozen[i]) g[i] = 0.0;
      }

      // Pure Newton first; a stiffness shift only when the factorization
      // breaks down or the direction fails to descend.
      bool have_direction = false;
      double lambda = 0.0;
      for (int attempt = 0; attempt < 8 && !have_direction; ++attempt) {
        if (lambda == 0.0) {
          ldlt.factorize(H);
        } else {
          Eigen::SparseMatrix<double> M = H + lambda * K2;
          ldlt.factorize(M);
        }
        if (ldlt.info() == Eigen::Success) {
          d = ldlt.solve(-g);
          if (d.allFinite() && g.dot(d) < 0.0) have_direction = true;
        }
        if (!have_direction)
          lambda = std::max(lambda * 100.0,
                            1e-12 * h_diag_max / std::max(k2_diag_max, 1e-300));
      }
      if (!have_direction) {
        // Steepest descent as the last resort.
        d = -g / std::max(h_diag_max, 1.0);
      }

      // Backtracking line search on the true energy. Near the optimum
      // the predicted decrease drops below the roundoff noise of the
      // energy itself; the full Newton step is taken directly there.
      double gd = g.dot(d);
      double noise = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(e));
      bool accepted = false;
      if (gd < 0.0 && 1e-4 * std::abs(gd) < noise) {
        prob.apply_step(u, d, 1.0);
        e = prob.energy(u, p);
        accepted = true;
      }
      double step = 1.0;
      std::vector<double> u_try = u;
      for (int ls = 0; ls < 50 && !accepted; ++ls) {
        u_try = u;
        prob.apply_step(u_try, d, step);
        double e_try = prob.energy(u_try, p);
        if (e_try <= e + 1e-4 * step * gd) {
          u = u_try;
          e = e_try;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      stage.energies.push_back(e);
      if (!accepted) {
        stage.iterations = it + 1;
        stage.grad_norm = gn;
        break;
      }
      // Residual plateau: no further digits are reachable in double
      // precision, so let the final check decide.
      size_t nres = stage.residuals.size();
      if (nres >= 5 && stage.residuals[nres - 1] > 0.5 * stage.residuals[nres - 5])
        break;
    }

    if (!stage_ok) {
      // Re-check: the loop may have exhausted iterations at tolerance.
      prob.gradient(u, p, g);
      double gn = g.lpNorm<Eigen::Infinity>();
      double scale = 1.0 + p * std::abs(e);
      if (gn <= opts.tol * scale) {
        stage_ok = true;
        stage.grad_norm = gn;
      }
    }
    report.stages.push_back(stage);
    if (!stage_ok) {
      report.converged = false;
      throw SolveError("p-Laplace continuation failed to converge at p = " +
                           std::to_string(p),
                       all_residuals);
    }

    // Unknowns the energy is numerically indifferent to (underflowed
    // density at large p) get the harmonic extension of their
    // surroundings instead of stale warm-start values.
    {
      prob.hessian(u, p, H);
      double h_diag_max = 0.0;
      for (int i = 0; i < H.outerSize(); ++i)
        h_diag_max = std::max(h_diag_max, H.coeff(i, i));
      std::vector<char> fill(mesh->vertex_count(), 0);
      int n_fill = 0;
      for (int i = 0; i < prob.n_free(); ++i)
        if (H.coeff(i, i) <= 1e-10 * h_diag_max) {
          fill[prob.vertex_of_dof(i)] = 1;
          ++n_fill;
        }
      if (n_fill > 0) {
        // The fill must not break monotonicity of the continuation in
        // p: a filled vertex keeps at least its warm-start value.
        std::vector<double> before = u;
        prob.harmonic_fill(u, fill);
        for (int v = 0; v < mesh->vertex_count(); ++v)
          if (fill[v]) u[v] = std::clamp(std::max(u[v], before[v]), 0.0, 1.0);
      }
    }

    if (want < ps.size() && std::abs(ps[want] - p) <= 1e-12 * std::max(1.0, p)) {
      ScalarField f;
      f.mesh = mesh;
      f.values = u;
      f.p = p;
      f.report = report;
      out.push_back(std::move(f));
      ++want;
    }
  }

  return out;
}

ScalarField solve_p_laplace(std::shared_ptr<const TriangleMesh> mesh, double p,
                            const SolveOptions& opts) {
  auto fields = solve_impl(std::move(mesh), {p}, opts);
  return std::move(fields.front());
}

std::vector<ScalarField> solve_p_sweep(std::shared_ptr<const TriangleMesh> mesh,
                                       const std::vector<double>& ps,
                                       const SolveOptions& opts) {
  return solve_impl(std::move(mesh), ps, opts);
}

GradientField recover_gradient(const ScalarField& field) {
  const TriangleMesh& mesh = *field.mesh;
  GradientField gf;
  gf.mesh = field.mesh;
  gf.triangle_gradient.resize(mesh.triangle_count());
  auto basis = basis_of(mesh);
  for (int t = 0; t < mesh.triangle_count(); ++t)
    gf.triangle_gradient[t] =
        triangle_gradient(mesh, basis[t], field.values, t);

  gf.vertex_gradient.assign(mesh.vertex_count(), Vec2{0, 0});
  gf.vertex_speed.assign(mesh.vertex_count(), 0.0);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    double wsum = 0;
    Vec2 acc{0, 0};
    for (int t : mesh.vertex_triangles[v]) {
      acc += gf.triangle_gradient[t] * mesh.areas[t];
      wsum += mesh.areas[t];
    }
    if (wsum > 0) acc = acc / wsum;
    gf.vertex_gradient[v] = acc;
    gf.vertex_speed[v] = norm(acc);
  }
  return gf;
}

FieldSampler::FieldSampler(const ScalarField& field, const GradientField& grad)
    : mesh_(field.mesh),
      values_(field.values),
      vertex_gradient_(grad.vertex_gradient),
      vertex_speed_(grad.vertex_speed) {
  if (field.mesh != grad.mesh)
    throw DomainError("field and gradient live on different meshes");
}

int FieldSampler::resolve(Vec2 p, std::array<double, 3>& bary) const {
  int t = mesh_->locate(p, hint_);
  if (t < 0) t = mesh_->nearest_triangle(p);
  if (t < 0) throw DomainError("point cannot be associated with the mesh");
  hint_ = t;
  bary = mesh_->barycentric(t, p);
  for (double& b : bary) b = std::max(b, 0.0);
  double s = bary[0] + bary[1] + bary[2];
  for (double& b : bary) b /= s;
  return t;
}

double FieldSampler::value(Vec2 p) const {
  std::array<double, 3> l{};
  int t = resolve(p, l);
  auto& tri = mesh_->triangles[t];
  return l[0] * values_[tri[0]] + l[1] * values_[tri[1]] + l[2] * values_[tri[2]];
}

Vec2 FieldSampler::gradient(Vec2 p) const {
  std::array<double, 3> l{};
  int t = resolve(p, l);
  auto& tri = mesh_->triangles[t];
  return vertex_gradient_[tri[0]] * l[0] + vertex_gradient_[tri[1]] * l[1] +
         vertex_gradient_[tri[2]] * l[2];
}

double FieldSampler::speed(Vec2 p) const { return norm(gradient(p)); }

double FieldSampler::nodal_speed(Vec2 p) const {
  std::array<double, 3> l{};
  int t = resolve(p, l);
  auto& tri = mesh_->triangles[t];
  return l[0] * vertex_speed_[tri[0]] + l[1] * vertex_speed_[tri[1]] +
         l[2] * vertex_speed_[tri[2]];
}

bool FieldSampler::inside(Vec2 p) const { return mesh_->locate(p, hint_) >= 0; }

} // namespace ringflow
