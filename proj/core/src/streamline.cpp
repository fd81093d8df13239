#include "ringflow/streamline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <unordered_map>

#include "ringflow/errors.hpp"
#include "ringflow/ridge.hpp"

namespace ringflow {

namespace {

// Cash-Karp embedded Runge-Kutta 4(5) tableau.
constexpr double ck_a[6][5] = {
    {0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0},
    {3.0 / 10, -9.0 / 10, 6.0 / 5, 0, 0},
    {-11.0 / 54, 5.0 / 2, -70.0 / 27, 35.0 / 27, 0},
    {1631.0 / 55296, 175.0 / 512, 575.0 / 13824, 44275.0 / 110592, 253.0 / 4096}};
constexpr double ck_b5[6] = {37.0 / 378, 0, 250.0 / 621, 125.0 / 594, 0, 512.0 / 1771};
constexpr double ck_b4[6] = {2825.0 / 27648,  0, 18575.0 / 48384, 13525.0 / 55296,
                             277.0 / 14336, 1.0 / 4};

Vec2 nudged_seed(const ConvexRing& ring, Vec2 seed, double h) {
  if (ring.omega.kind != RegionKind::polygon) return seed;
  const auto& verts = ring.omega.vertices;
  size_t n = verts.size();
  for (size_t i = 0; i < n; ++i) {
    if (dist(seed, verts[i]) > 1e-9) continue;
    Vec2 prev = verts[(i + n - 1) % n];
    Vec2 next = verts[(i + 1) % n];
    Vec2 n1 = perp(normalized(verts[i] - prev));
    Vec2 n2 = perp(normalized(next - verts[i]));
    return seed + normalized(n1 + n2) * (h / 4.0);
  }
  return seed;
}

} // namespace

Vec2 Streamline::position_at(double t) const {
  if (points.empty()) return seed;
  if (t <= times.front()) return points.front();
  if (t >= times.back()) return points.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  size_t i = static_cast<size_t>(it - times.begin());
  double t0 = times[i - 1], t1 = times[i];
  double w = (t - t0) / (t1 - t0);
  return points[i - 1] + (points[i] - points[i - 1]) * w;
}

Streamline trace(const FieldSampler& sampler, const ConvexRing& ring, Vec2 seed,
                 const TraceOptions& opts) {
  const TriangleMesh& mesh = sampler.mesh();
  const double h = mesh.h;
  const double snap = opts.snap_dist > 0 ? opts.snap_dist : 0.5 * h;
  const double dt_min = 1e-12;

  ConvexRegion inner = ring.meshed_inner();
  if (!ring.omega.contains(seed, 1e-9) || inner.set_dist(seed) < -1e-9)
    throw DomainError("seed is outside the closure of the ring");

  Vec2 y = nudged_seed(ring, seed, h);

  Streamline s;
  s.seed = seed;
  double t = 0.0;
  double u_cur = sampler.value(y);
  s.points.push_back(y);
  s.times.push_back(0.0);
  s.speeds.push_back(norm(sampler.gradient(y)));

  double dt = 0.2 * h / std::max(s.speeds.back(), 1e-3);
  double dwell = 0.0;

  auto finish = [&](Termination why) {
    s.termination = why;
    s.total_time = t;
    return s;
  };

  for (int step = 0; step < opts.max_steps; ++step) {
    if (mesh.inner_boundary_dist(y) <= snap) {
      Vec2 q = mesh.project_to_inner(y);
      double sp = std::max(norm(sampler.gradient(y)), 1e-12);
      t += dist(y, q) / sp;
      s.points.push_back(q);
      s.times.push_back(t);
      s.speeds.push_back(sampler.speed(q));
      return finish(Termination::reached_inner);
    }
    if (t > opts.max_time) return finish(Termination::stagnated);

    double speed_here = norm(sampler.gradient(y));
    dt = std::min(dt, 0.9 * h / std::max(speed_here, 1e-9));

    // One adaptive Cash-Karp step.
    Vec2 y_new = y;
    double dt_used = 0.0, dt_next = dt;
    bool accepted = false;
    while (dt >= dt_min) {
      Vec2 k[6];
      k[0] = sampler.gradient(y);
      for (int i = 1; i < 6; ++i) {
        Vec2 yi = y;
        for (int j = 0; j < i; ++j) yi += k[j] * (ck_a[i][j] * dt);
        k[i] = sampler.gradient(yi);
      }
      Vec2 y5 = y, y4 = y;
      for (int i = 0; i < 6; ++i) {
        y5 += k[i] * (ck_b5[i] * dt);
        y4 += k[i] * (ck_b4[i] * dt);
      }
      double err = dist(y5, y4);
      double tol_step = 1e-10 + opts.rel_tol * std::max(1.0, norm(y5));
      if (err <= tol_step) {
        y_new = y5;
        dt_used = dt;
        double grow = err > 0 ? 0.9 * std::pow(tol_step / err, 0.2) : 2.0;
        dt_next = dt * std::clamp(grow, 0.2, 2.0);
        accepted = true;
        break;
      }
      dt *= std::max(0.9 * std::pow(tol_step / err, 0.25), 0.1);
    }
    if (!accepted) return finish(Termination::stagnated);

    // Enforce strict ascent of u and containment; fall back to tiny
    // Euler steps when the high-order step violates either. Near the
    // outer boundary the recovered gradient may carry a spurious
    // outward component; it is clipped away in the fallback.
    double u_new = sampler.value(y_new);
    if (!(u_new > u_cur) || !sampler.inside(y_new)) {
      Vec2 g_here = sampler.gradient(y);
      if (ring.omega.boundary_dist(y) < h) {
        Vec2 n_in = ring.omega.inward_normal_near(y);
        double along = dot(g_here, n_in);
        if (along < 0) g_here = g_here - n_in * along;
      }
      bool fixed = false;
      double dt_retry = 0.25 * dt_used;
      while (dt_retry > dt_min) {
        Vec2 yr = y + g_here * dt_retry;
        if (sampler.inside(yr) && sampler.value(yr) > u_cur) {
          y_new = yr;
          u_new = sampler.value(yr);
          dt_used = dt_retry;
          dt_next = 4.0 * dt_retry;
          fixed = true;
          break;
        }
        dt_retry *= 0.5;
      }
      if (!fixed) {
        Vec2 probe = y + g_here * (8.0 * dt_min);
        return finish(sampler.inside(probe) ? Termination::stagnated
                                            : Termination::left_domain);
      }
    }

    t += dt_used;
    y = y_new;
    u_cur = u_new;
    double sp = norm(sampler.gradient(y));
    s.points.push_back(y);
    s.times.push_back(t);
    s.speeds.push_back(sp);
    dt = dt_next;

    if (sp < opts.stagnation_speed) {
      dwell += dt_used;
      if (dwell > opts.stagnation_dwell) return finish(Termination::stagnated);
    } else {
      dwell = 0.0;
    }
  }
  return finish(Termination::stagnated);
}

SpeedProfile speed_profile(const Streamline& s, const ScalarField& field,
                           int n_intervals, const RidgeGraph* ridge,
                           double contact_tol, double seam) {
  if (s.points.size() < 2) throw DomainError("streamline has too few samples");
  if (n_intervals < 4) throw DomainError("need at least 4 resampling intervals");
  const TriangleMesh& mesh = *field.mesh;
  if (contact_tol <= 0) contact_tol = std::max(mesh.h, 1e-3);
  if (seam <= 0) seam = 2.0 * mesh.h;

  GradientField grad; // values unused; the sampler wants one
  grad.mesh = field.mesh;
  grad.vertex_gradient.assign(mesh.vertex_count(), Vec2{0, 0});
  grad.vertex_speed.assign(mesh.vertex_count(), 0.0);
  FieldSampler sampler(field, grad);

  double T = s.times.back();
  int n = n_intervals;
  SpeedProfile prof;
  prof.t.resize(n + 1);
  prof.F.resize(n + 1);
  std::vector<Vec2> pos(n + 1);
  for (int i = 0; i <= n; ++i) {
    double ti = T * i / n;
    prof.t[i] = ti;
    pos[i] = s.position_at(ti);
    prof.F[i] = sampler.value(pos[i]);
  }

  prof.speed.resize(n);
  for (int i = 0; i < n; ++i) {
    double df = (prof.F[i + 1] - prof.F[i]) / std::max(prof.t[i + 1] - prof.t[i], 1e-300);
    prof.speed[i] = std::sqrt(std::max(0.0, df));
  }

  // An interval is measurable when its F increment clears the
  // interpolation noise floor; tiny increments (the wedge zone at
  // nudged corner seeds) carry no speed information. The terminal
  // band is wider than the seam: around a regularized point inner
  // region the flow crowds over a few cells, not just the kink width.
  const double df_floor = 16.0 * mesh.h * mesh.h;
  const double terminal_band = 2.0 * seam;
  std::vector<char> measurable(n, 0);
  for (int i = 0; i < n; ++i)
    measurable[i] = (prof.F[i + 1] - prof.F[i]) >= df_floor &&
                            mesh.inner_boundary_dist(pos[i]) > terminal_band &&
                            mesh.inner_boundary_dist(pos[i + 1]) > terminal_band
                        ? 1
                        : 0;

  // Intervals riding the ridge tube carry the gradient kink; adjacent
  // comparisons there see discrete chatter, so the tube contributes a
  // single entry-to-exit comparison instead.
  std::vector<char> on_tube(n, 0);
  if (ridge && !ridge->empty()) {
    for (int i = 0; i < n; ++i) {
      Vec2 mid = s.position_at(0.5 * (prof.t[i] + prof.t[i + 1]));
      on_tube[i] = ridge->distance_to(mid) <= seam ? 1 : 0;
    }
  }
  prof.included.assign(n, 0);
  for (int i = 0; i < n; ++i) prof.included[i] = measurable[i] && !on_tube[i];

  double max_speed = 1e-12;
  for (int i = 0; i < n; ++i)
    if (measurable[i]) max_speed = std::max(max_speed, prof.speed[i]);

  double worst_drop = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    if (!prof.included[i] || !prof.included[i + 1]) continue;
    worst_drop = std::min(worst_drop, (prof.speed[i + 1] - prof.speed[i]) / max_speed);
  }
  prof.monotone_violation = worst_drop;

  double f_range = std::max(std::abs(prof.F[n] - prof.F[0]), 1e-12);
  double worst_d2 = 0.0;
  for (int i = 1; i < n; ++i) {
    if (!prof.included[i - 1] || !prof.included[i]) continue;
    double d2 = prof.F[i + 1] - 2.0 * prof.F[i] + prof.F[i - 1];
    worst_d2 = std::min(worst_d2, d2 / f_range);
  }
  prof.convexity_violation = worst_d2;
  return prof;
}

namespace {

// Uniform hash grid over polyline segments for distance queries.
class PolylineIndex {
public:
  PolylineIndex(const std::vector<Vec2>& pts, double cell) : pts_(pts), cell_(cell) {
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      Vec2 lo{std::min(pts[i].x, pts[i + 1].x), std::min(pts[i].y, pts[i + 1].y)};
      Vec2 hi{std::max(pts[i].x, pts[i + 1].x), std::max(pts[i].y, pts[i + 1].y)};
      for (long long cx = cell_index(lo.x); cx <= cell_index(hi.x); ++cx)
        for (long long cy = cell_index(lo.y); cy <= cell_index(hi.y); ++cy)
          cells_[key(cx, cy)].push_back(static_cast<int>(i));
    }
  }

  // Distance from p to the polyline, exact within `radius` (larger
  // distances may be reported as infinity).
  double distance_within(Vec2 p, double radius, int* seg = nullptr,
                         double* frac = nullptr) const {
    double best = std::numeric_limits<double>::infinity();
    long long r = static_cast<long long>(radius / cell_) + 1;
    long long cx = cell_index(p.x), cy = cell_index(p.y);
    for (long long x = cx - r; x <= cx + r; ++x) {
      for (long long y = cy - r; y <= cy + r; ++y) {
        auto it = cells_.find(key(x, y));
        if (it == cells_.end()) continue;
        for (int i : it->second) {
          Vec2 c = closest_point_on_segment(p, pts_[i], pts_[i + 1]);
          double d = dist(p, c);
          if (d < best) {
            best = d;
            if (seg) *seg = i;
            if (frac) {
              double len = dist(pts_[i], pts_[i + 1]);
              *frac = len > 0 ? dist(pts_[i], c) / len : 0.0;
            }
          }
        }
      }
    }
    return best;
  }

private:
  long long cell_index(double v) const {
    return static_cast<long long>(std::floor(v / cell_));
  }
  static long long key(long long x, long long y) { return (x << 24) ^ (y & 0xffffff); }
  const std::vector<Vec2>& pts_;
  double cell_;
  std::unordered_map<long long, std::vector<int>> cells_;
};

bool segments_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  double d1 = cross(b - a, c - a);
  double d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c);
  double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

} // namespace

std::vector<MeetingEvent> detect_meetings(std::span<const Streamline> streamlines,
                                          double tol, const TriangleMesh* mesh,
                                          double terminal_clearance) {
  if (!(tol > 0)) throw DomainError("meeting tolerance must be positive");
  if (mesh && tol < 0.5 * mesh->h)
    throw DomainError("meeting tolerance must be at least half a mesh cell");
  size_t n = streamlines.size();
  std::vector<std::unique_ptr<PolylineIndex>> index(n);
  for (size_t i = 0; i < n; ++i)
    if (streamlines[i].points.size() >= 2)
      index[i] = std::make_unique<PolylineIndex>(streamlines[i].points, 4.0 * tol);

  std::vector<MeetingEvent> events;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const Streamline& A = streamlines[i];
      const Streamline& B = streamlines[j];
      if (!index[j] || A.points.size() < 2) continue;

      size_t m = A.points.size();
      std::vector<double> d(m), frac(m);
      std::vector<int> seg(m);
      for (size_t k = 0; k < m; ++k)
        d[k] = index[j]->distance_within(A.points[k], tol, &seg[k], &frac[k]);

      // Earliest sample after which the curves stay within tol. A
      // merge must share an actual arc: at least 3 samples and a
      // trailing arclength of a few tolerances, which filters the
      // terminal crowding where every curve ends on the small inner
      // boundary.
      size_t k_meet = m;
      for (size_t k = m; k-- > 0;) {
        if (d[k] <= tol)
          k_meet = k;
        else
          break;
      }
      double shared_arc = 0;
      for (size_t k = k_meet; k + 1 < m; ++k)
        shared_arc += dist(A.points[k], A.points[k + 1]);
      bool merged = k_meet < m && (m - k_meet) >= 3 && shared_arc >= 3.0 * tol;
      if (merged && mesh && terminal_clearance > 0) {
        bool clear = false;
        for (size_t k = k_meet; k < m && !clear; ++k)
          clear = mesh->inner_boundary_dist(A.points[k]) > terminal_clearance;
        merged = clear;
      }

      if (merged) {
        MeetingEvent ev;
        ev.point = A.points[k_meet];
        ev.first = static_cast<int>(i);
        ev.second = static_cast<int>(j);
        ev.t_first = A.times[k_meet];
        int sg = seg[k_meet];
        double fr = frac[k_meet];
        ev.t_second = B.times[sg] + fr * (B.times[sg + 1] - B.times[sg]);
        events.push_back(ev);
      }

      // Transversal crossing scan over the non-merged prefix. Inside
      // the terminal band the curves converge to the same small inner
      // boundary and apparent crossings are endpoint artifacts.
      size_t scan_end = merged ? k_meet : m;
      for (size_t k = 0; k + 1 < scan_end; ++k) {
        if (d[k] > tol && d[k + 1] > tol) continue; // cheap reject
        if (mesh && terminal_clearance > 0 &&
            mesh->inner_boundary_dist(A.points[k]) <= terminal_clearance &&
            mesh->inner_boundary_dist(A.points[k + 1]) <= terminal_clearance)
          continue;
        for (size_t l = 0; l + 1 < B.points.size(); ++l) {
          if (segments_cross(A.points[k], A.points[k + 1], B.points[l],
                             B.points[l + 1])) {
            throw IntegrityError("streamlines cross transversally without merging");
          }
        }
      }
    }
  }
  return events;
}

PrefixReport constant_speed_prefix(const Streamline& s, const ScalarField& field,
                                   const RidgeGraph& ridge, double tol,
                                   int n_intervals) {
  PrefixReport rep;
  rep.t_meet = s.total_time;
  rep.met_ridge = false;
  if (!ridge.empty()) {
    for (size_t k = 0; k < s.points.size(); ++k) {
      if (ridge.distance_to(s.points[k]) <= tol) {
        rep.t_meet = s.times[k];
        rep.met_ridge = true;
        break;
      }
    }
  }
  if (!rep.met_ridge && s.termination != Termination::reached_inner)
    throw TraceIncompleteError(
        "streamline neither meets the ridge nor reaches the inner boundary");
  if (rep.t_meet <= 1e-12) {
    rep.variation = 0.0;
    return rep;
  }

  GradientField grad; // values unused; the sampler wants one
  grad.mesh = field.mesh;
  grad.vertex_gradient.assign(field.mesh->vertex_count(), Vec2{0, 0});
  grad.vertex_speed.assign(field.mesh->vertex_count(), 0.0);
  FieldSampler sampler(field, grad);

  // Resample F inside the prefix window, proportionally to its share
  // of the trace, so speed estimates never straddle the contact.
  // Intervals whose F increment is below the interpolation noise floor
  // carry no speed information and are skipped.
  int m = std::clamp(static_cast<int>(n_intervals * rep.t_meet /
                                      std::max(s.total_time, 1e-300)),
                     4, n_intervals);
  const double df_floor = 16.0 * field.mesh->h * field.mesh->h;
  double s0 = -1.0, worst = 0.0;
  double f_prev = sampler.value(s.position_at(0.0));
  for (int i = 1; i <= m; ++i) {
    double ti = rep.t_meet * i / m;
    double f_here = sampler.value(s.position_at(ti));
    double df = f_here - f_prev;
    f_prev = f_here;
    if (df < df_floor) continue;
    double sp = std::sqrt(df / (rep.t_meet / m));
    if (s0 < 0)
      s0 = std::max(sp, 1e-12);
    else
      worst = std::max(worst, std::abs(sp - s0) / s0);
  }
  rep.variation = worst;
  return rep;
}

} // namespace ringflow
