#include "ringflow/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "ringflow/errors.hpp"

namespace ringflow {

namespace {

struct Pivot {
  int index;
  bool is_min;
};

// Alternating extrema of a cyclic sequence with hysteresis `tol`:
// swings smaller than tol are ignored. The walk starts at the global
// maximum, so the pivot list begins with a minimum and ends with the
// global maximum.
std::vector<Pivot> zigzag_pivots(const std::vector<double>& v, double tol) {
  int n = static_cast<int>(v.size());
  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (v[i] > v[i0]) i0 = i;

  std::vector<Pivot> pivots;
  bool looking_down = true;
  int cur = i0;
  for (int step = 1; step <= n; ++step) {
    int idx = (i0 + step) % n;
    if (looking_down) {
      if (v[idx] < v[cur]) {
        cur = idx;
      } else if (v[idx] > v[cur] + tol) {
        pivots.push_back({cur, true});
        cur = idx;
        looking_down = false;
      }
    } else {
      if (v[idx] > v[cur]) {
        cur = idx;
      } else if (v[idx] < v[cur] - tol) {
        pivots.push_back({cur, false});
        cur = idx;
        looking_down = true;
      }
    }
  }
  if (!pivots.empty() && !looking_down) pivots.push_back({cur, false});
  return pivots;
}

} // namespace

namespace {

// Alternating extrema of one open chunk of samples; pivots strictly
// inside the chunk.
std::vector<Pivot> chunk_pivots(const std::vector<double>& v, int lo, int hi,
                                double tol) {
  std::vector<Pivot> pivots;
  if (hi - lo < 3) return pivots;
  bool looking_down = v[lo + 1] < v[lo];
  int cur = lo;
  for (int idx = lo + 1; idx <= hi; ++idx) {
    if (looking_down) {
      if (v[idx] < v[cur]) {
        cur = idx;
      } else if (v[idx] > v[cur] + tol) {
        if (cur != lo) pivots.push_back({cur, true});
        cur = idx;
        looking_down = false;
      }
    } else {
      if (v[idx] > v[cur]) {
        cur = idx;
      } else if (v[idx] < v[cur] - tol) {
        if (cur != lo) pivots.push_back({cur, false});
        cur = idx;
        looking_down = true;
      }
    }
  }
  if (!looking_down && cur != lo && cur != hi) pivots.push_back({cur, false});
  return pivots;
}

} // namespace

BoundarySpeedProfile boundary_speed(const ScalarField& field, const ConvexRing& ring,
                                    int n_samples) {
  if (n_samples < 64) throw DomainError("need at least 64 boundary samples");
  const double h = field.mesh->h;
  BoundaryParam param(ring.omega);
  ConvexRegion inner = ring.meshed_inner();

  GradientField dummy;
  dummy.mesh = field.mesh;
  dummy.vertex_gradient.assign(field.mesh->vertex_count(), Vec2{0, 0});
  dummy.vertex_speed.assign(field.mesh->vertex_count(), 0.0);
  FieldSampler sampler(field, dummy);

  BoundarySpeedProfile prof;
  prof.total_length = param.total_length();
  prof.vertex_params = param.vertex_params();
  const bool is_polygon = ring.omega.kind == RegionKind::polygon;

  // Sample arclengths, polygon vertices included exactly.
  std::vector<double> stations;
  if (is_polygon) {
    const auto& vp = param.vertex_params();
    size_t nv = vp.size();
    for (size_t j = 0; j < nv; ++j) {
      double lo = vp[j];
      double hi = (j + 1 < nv) ? vp[j + 1] : param.total_length();
      int ne = std::max(6, static_cast<int>(std::lround(
                               n_samples * (hi - lo) / param.total_length())));
      for (int k = 0; k < ne; ++k)
        stations.push_back(lo + (hi - lo) * k / ne);
    }
  } else {
    for (int k = 0; k < n_samples; ++k)
      stations.push_back(param.total_length() * k / n_samples);
  }

  auto vertex_dist = [&](double s) {
    if (!is_polygon) return std::numeric_limits<double>::max();
    double best = std::numeric_limits<double>::max();
    for (double w : prof.vertex_params) {
      double ds = std::abs(s - w);
      best = std::min(best, std::min(ds, prof.total_length - ds));
    }
    return best;
  };

  for (double s : stations) {
    BoundarySample bs;
    bs.s = s;
    bs.point = param.point_at(s);
    bs.inward_normal = param.inward_normal_at(s);
    // The offset shrinks toward polygon vertices: there the field is a
    // two-dimensional wedge and a fixed offset would misread it.
    double dv = vertex_dist(s);
    double d = std::min(h, std::max(0.6 * dv, h / 16.0));
    Vec2 off = bs.point + bs.inward_normal * d;
    for (int k = 0; k < 10; ++k) {
      if (ring.omega.contains(off) && inner.set_dist(off) > 0) break;
      d *= 0.5;
      off = bs.point + bs.inward_normal * d;
    }
    // One-sided normal derivative; u = 0 on the outer boundary.
    bs.speed = sampler.value(off) / d;
    prof.samples.push_back(bs);
  }

  int n = static_cast<int>(prof.samples.size());
  std::vector<double> v(n);
  double vmax = -std::numeric_limits<double>::infinity();
  double vmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    v[i] = prof.samples[i].speed;
    vmax = std::max(vmax, v[i]);
    vmin = std::min(vmin, v[i]);
  }
  double range = vmax - vmin;
  prof.flat_tol = 0.01 * range;
  if (range <= std::max(1e-14, 0.02 * std::abs(vmax))) {
    prof.globally_flat = true;
    return prof;
  }

  auto expand = [&](int idx, bool is_min, int lo_limit, int hi_limit) {
    ExtremeArc arc;
    arc.is_minimum = is_min;
    arc.value = v[idx];
    int lo = idx, hi = idx, count = 1;
    auto within = [&](int i) {
      return is_min ? v[i] <= arc.value + prof.flat_tol
                    : v[i] >= arc.value - prof.flat_tol;
    };
    while (lo > lo_limit && within(lo - 1)) {
      --lo;
      ++count;
    }
    while (hi < hi_limit && within(hi + 1)) {
      ++hi;
      ++count;
    }
    arc.is_flat = count >= 5;
    arc.s_lo = prof.samples[lo].s;
    arc.s_hi = prof.samples[hi].s;
    arc.point_lo = prof.samples[lo].point;
    arc.point_hi = prof.samples[hi].point;
    if (!arc.is_flat) {
      arc.s_lo = arc.s_hi = prof.samples[idx].s;
      arc.point_lo = arc.point_hi = prof.samples[idx].point;
    }
    return arc;
  };

  if (is_polygon)
    prof.corner_zone = std::max(2.0 * h, 2.5 * prof.total_length / n);

  if (is_polygon) {
    // Polygon vertices carry vanishing speed: each one is a minimum.
    // The one-cell zone around a vertex is owned by it; interior
    // extrema are detected on the remaining chunks of each edge.
    const double corner_zone = prof.corner_zone;
    size_t nv = prof.vertex_params.size();
    for (size_t j = 0; j < nv; ++j) {
      ExtremeArc arc;
      arc.is_minimum = true;
      arc.is_flat = false;
      arc.s_lo = arc.s_hi = prof.vertex_params[j];
      arc.point_lo = arc.point_hi = param.point_at(prof.vertex_params[j]);
      // Value from the vertex sample itself.
      for (int i = 0; i < n; ++i)
        if (std::abs(prof.samples[i].s - prof.vertex_params[j]) < 1e-12)
          arc.value = prof.samples[i].speed;
      prof.minima.push_back(arc);
    }
    for (size_t j = 0; j < nv; ++j) {
      double lo_s = prof.vertex_params[j];
      double hi_s = (j + 1 < nv) ? prof.vertex_params[j + 1] : prof.total_length;
      int lo = -1, hi = -1;
      for (int i = 0; i < n; ++i) {
        double s = prof.samples[i].s;
        if (s < lo_s - 1e-12 || s > hi_s + 1e-12) continue;
        if (s - lo_s < corner_zone || hi_s - s < corner_zone) continue;
        if (lo < 0) lo = i;
        hi = i;
      }
      if (lo < 0 || hi - lo < 3) continue;
      for (const Pivot& pv : chunk_pivots(v, lo, hi, prof.flat_tol))
        (pv.is_min ? prof.minima : prof.maxima).push_back(expand(pv.index, pv.is_min, lo, hi));
      // The chunk's own maximum stands for the edge maximum when the
      // zigzag finds no interior structure.
      int arg = lo;
      for (int i = lo; i <= hi; ++i)
        if (v[i] > v[arg]) arg = i;
      bool covered = false;
      for (const ExtremeArc& m : prof.maxima)
        if (!m.is_minimum && m.s_lo >= lo_s && m.s_hi <= hi_s &&
            m.s_lo <= prof.samples[arg].s && prof.samples[arg].s <= m.s_hi)
          covered = true;
      if (!covered) prof.maxima.push_back(expand(arg, false, lo, hi));
    }
  } else {
    // Smooth boundary: cyclic hysteresis walk starting at the global
    // maximum, which yields an alternating closed pivot sequence.
    for (const Pivot& pv : zigzag_pivots(v, prof.flat_tol)) {
      ExtremeArc arc;
      int idx = pv.index;
      arc.is_minimum = pv.is_min;
      arc.value = v[idx];
      int lo = idx, hi = idx, count = 1;
      auto within = [&](int i) {
        return pv.is_min ? v[i] <= arc.value + prof.flat_tol
                         : v[i] >= arc.value - prof.flat_tol;
      };
      while (count < n && within((lo + n - 1) % n)) {
        lo = (lo + n - 1) % n;
        ++count;
      }
      while (count < n && within((hi + 1) % n)) {
        hi = (hi + 1) % n;
        ++count;
      }
      arc.is_flat = count >= 5;
      arc.s_lo = prof.samples[lo].s;
      arc.s_hi = prof.samples[hi].s;
      arc.point_lo = prof.samples[lo].point;
      arc.point_hi = prof.samples[hi].point;
      if (!arc.is_flat) {
        arc.s_lo = arc.s_hi = prof.samples[idx].s;
        arc.point_lo = arc.point_hi = prof.samples[idx].point;
      }
      (pv.is_min ? prof.minima : prof.maxima).push_back(arc);
    }
  }

  auto by_position = [](const ExtremeArc& a, const ExtremeArc& b) {
    return a.s_lo < b.s_lo;
  };
  std::sort(prof.minima.begin(), prof.minima.end(), by_position);
  std::sort(prof.maxima.begin(), prof.maxima.end(), by_position);
  return prof;
}

double edge_monotonicity_check(const BoundarySpeedProfile& profile, int edge_index) {
  if (profile.vertex_params.empty())
    throw DomainError("edge monotonicity needs a polygon boundary");
  int ne = static_cast<int>(profile.vertex_params.size());
  if (edge_index < 0 || edge_index >= ne) throw DomainError("edge index out of range");

  double lo = profile.vertex_params[edge_index];
  double hi = (edge_index + 1 < ne) ? profile.vertex_params[edge_index + 1]
                                    : profile.total_length;

  // Samples on the edge outside the vertex-owned corner zones.
  std::vector<double> v;
  for (const BoundarySample& bs : profile.samples) {
    if (bs.s < lo - 1e-12 || bs.s > hi + 1e-12) continue;
    if (bs.s - lo < profile.corner_zone || hi - bs.s < profile.corner_zone) continue;
    v.push_back(bs.speed);
  }
  if (v.size() < 3) throw DomainError("edge has too few profile samples");

  size_t m = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[m]) m = i;

  double worst = 0;
  for (size_t i = 0; i + 1 <= m; ++i) worst = std::max(worst, v[i] - v[i + 1]);
  for (size_t i = m; i + 1 < v.size(); ++i) worst = std::max(worst, v[i + 1] - v[i]);
  return worst;
}

class RidgeGraph::Index {
public:
  Index(const std::vector<Streamline>& gammas, double cell) : cell_(cell) {
    for (size_t g = 0; g < gammas.size(); ++g) {
      const auto& pts = gammas[g].points;
      for (size_t i = 0; i + 1 < pts.size(); ++i) {
        segs_.push_back({pts[i], pts[i + 1], static_cast<int>(g)});
        Vec2 lo{std::min(pts[i].x, pts[i + 1].x), std::min(pts[i].y, pts[i + 1].y)};
        Vec2 hi{std::max(pts[i].x, pts[i + 1].x), std::max(pts[i].y, pts[i + 1].y)};
        for (long long cx = ci(lo.x); cx <= ci(hi.x); ++cx)
          for (long long cy = ci(lo.y); cy <= ci(hi.y); ++cy)
            cells_[key(cx, cy)].push_back(static_cast<int>(segs_.size()) - 1);
      }
    }
  }

  double distance(Vec2 p) const {
    if (segs_.empty()) return std::numeric_limits<double>::infinity();
    double radius = cell_;
    for (int round = 0; round < 48; ++round) {
      double best = query(p, radius);
      if (best <= radius) {
        // Re-query to make the answer exact within the found bound.
        return query(p, best + cell_);
      }
      radius *= 2.0;
    }
    return brute(p);
  }

  std::vector<std::pair<std::pair<Vec2, Vec2>, int>> all_segments() const {
    std::vector<std::pair<std::pair<Vec2, Vec2>, int>> out;
    for (auto& s : segs_) out.push_back({{s.a, s.b}, s.gamma});
    return out;
  }

private:
  struct Seg {
    Vec2 a, b;
    int gamma;
  };

  double query(Vec2 p, double radius) const {
    double best = std::numeric_limits<double>::infinity();
    long long r = static_cast<long long>(radius / cell_) + 1;
    long long cx = ci(p.x), cy = ci(p.y);
    for (long long x = cx - r; x <= cx + r; ++x) {
      for (long long y = cy - r; y <= cy + r; ++y) {
        auto it = cells_.find(key(x, y));
        if (it == cells_.end()) continue;
        for (int i : it->second)
          best = std::min(best, point_segment_dist(p, segs_[i].a, segs_[i].b));
      }
    }
    return best;
  }

  double brute(Vec2 p) const {
    double best = std::numeric_limits<double>::infinity();
    for (auto& s : segs_) best = std::min(best, point_segment_dist(p, s.a, s.b));
    return best;
  }

  long long ci(double x) const { return static_cast<long long>(std::floor(x / cell_)); }
  static long long key(long long x, long long y) { return (x << 24) ^ (y & 0xffffff); }

  double cell_;
  std::vector<Seg> segs_;
  std::unordered_map<long long, std::vector<int>> cells_;
};

RidgeGraph::RidgeGraph(std::vector<Streamline> gammas, std::vector<MeetingEvent> merges,
                       double index_cell)
    : gammas_(std::move(gammas)), merges_(std::move(merges)) {
  index_ = std::make_shared<const Index>(gammas_, std::max(index_cell, 1e-9));
}

double RidgeGraph::distance_to(Vec2 p) const {
  if (!index_) return std::numeric_limits<double>::infinity();
  return index_->distance(p);
}

std::vector<std::pair<std::pair<Vec2, Vec2>, int>> RidgeGraph::segments() const {
  if (!index_) return {};
  return index_->all_segments();
}

RidgeGraph build_ridge(const ScalarField& field, const GradientField& grad,
                       const ConvexRing& ring, const BoundarySpeedProfile& profile,
                       const TraceOptions& opts) {
  FieldSampler sampler(field, grad);
  const double h = field.mesh->h;

  std::vector<Vec2> seeds;
  for (const ExtremeArc& arc : profile.minima) {
    seeds.push_back(arc.point_lo);
    if (arc.is_flat) seeds.push_back(arc.point_hi);
  }

  std::vector<Streamline> gammas;
  for (Vec2 seed : seeds) {
    Streamline g = trace(sampler, ring, seed, opts);
    if (g.termination != Termination::reached_inner)
      throw TraceIncompleteError("attracting streamline stalled before the inner boundary");
    gammas.push_back(std::move(g));
  }

  std::vector<MeetingEvent> merges;
  if (gammas.size() >= 2) merges = detect_meetings(gammas, std::max(h, 1e-3));

  return RidgeGraph(std::move(gammas), std::move(merges), 4.0 * h);
}

MeetingClassification classify_meetings(std::span<const MeetingEvent> meetings,
                                        const RidgeGraph& ridge, double tol) {
  MeetingClassification out;
  for (size_t i = 0; i < meetings.size(); ++i) {
    if (!ridge.empty() && ridge.distance_to(meetings[i].point) <= tol)
      out.on_ridge.push_back(static_cast<int>(i));
    else
      out.off_ridge.push_back(static_cast<int>(i));
  }
  return out;
}

} // namespace ringflow
