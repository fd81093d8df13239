#include "delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ringflow/errors.hpp"

namespace ringflow::detail {

namespace {

struct Tri {
  std::array<int, 3> v;   // CCW vertices
  std::array<int, 3> nbr; // nbr[i] shares the edge opposite v[i]; -1 = none
  bool alive = true;
};

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

// > 0 iff p lies strictly inside the circumcircle of CCW (a,b,c).
double incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 p) {
  double ax = a.x - p.x, ay = a.y - p.y;
  double bx = b.x - p.x, by = b.y - p.y;
  double cx = c.x - p.x, cy = c.y - p.y;
  double a2 = ax * ax + ay * ay;
  double b2 = bx * bx + by * by;
  double c2 = cx * cx + cy * cy;
  return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

class Triangulator {
public:
  explicit Triangulator(const std::vector<Vec2>& points) : pts_(points) {
    Vec2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Vec2 hi{-lo.x, -lo.y};
    for (Vec2 p : points) {
      lo.x = std::min(lo.x, p.x);
      lo.y = std::min(lo.y, p.y);
      hi.x = std::max(hi.x, p.x);
      hi.y = std::max(hi.y, p.y);
    }
    Vec2 c = (lo + hi) * 0.5;
    double span = std::max({hi.x - lo.x, hi.y - lo.y, 1.0});
    double r = 16.0 * span;
    int s0 = add_point({c.x - 2.0 * r, c.y - r});
    int s1 = add_point({c.x + 2.0 * r, c.y - r});
    int s2 = add_point({c.x, c.y + 2.0 * r});
    super_ = {s0, s1, s2};
    tris_.push_back(Tri{{s0, s1, s2}, {-1, -1, -1}});
  }

  void insert_all() {
    int n = static_cast<int>(pts_.size()) - 3; // exclude super vertices
    for (int i = 0; i < n; ++i) insert(i);
  }

  std::vector<std::array<int, 3>> extract() const {
    std::vector<std::array<int, 3>> out;
    for (const Tri& t : tris_) {
      if (!t.alive) continue;
      if (t.v[0] >= first_super() || t.v[1] >= first_super() || t.v[2] >= first_super())
        continue;
      out.push_back(t.v);
    }
    return out;
  }

private:
  int first_super() const { return super_[0]; }

  int add_point(Vec2 p) {
    pts_.push_back(p);
    return static_cast<int>(pts_.size()) - 1;
  }

  double local_eps(int t, Vec2 p) const {
    double m = std::abs(p.x) + std::abs(p.y);
    for (int v : tris_[t].v) m = std::max(m, std::abs(pts_[v].x) + std::abs(pts_[v].y));
    return 1e-13 * m * m;
  }

  int locate(Vec2 p, int hint) const {
    int t = hint;
    if (t < 0 || !tris_[t].alive) {
      for (int i = static_cast<int>(tris_.size()) - 1; i >= 0; --i)
        if (tris_[i].alive) {
          t = i;
          break;
        }
    }
    int guard = static_cast<int>(tris_.size()) * 4 + 64;
    while (guard-- > 0) {
      const Tri& tr = tris_[t];
      int next = -1;
      for (int i = 0; i < 3; ++i) {
        Vec2 a = pts_[tr.v[(i + 1) % 3]];
        Vec2 b = pts_[tr.v[(i + 2) % 3]];
        if (orient(a, b, p) < -local_eps(t, p)) {
          next = tr.nbr[i];
          break;
        }
      }
      if (next < 0) return t;
      t = next;
    }
    // Degenerate walk; fall back to a linear scan.
    for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
      if (!tris_[i].alive) continue;
      const Tri& tr = tris_[i];
      bool in = true;
      for (int k = 0; k < 3 && in; ++k)
        in = orient(pts_[tr.v[(k + 1) % 3]], pts_[tr.v[(k + 2) % 3]], p) >=
             -local_eps(i, p);
      if (in) return i;
    }
    throw Error("delaunay: point location failed");
  }

  void insert(int vi) {
    Vec2 p = pts_[vi];
    int seed = locate(p, last_);

    // Grow the cavity of triangles whose circumcircle contains p.
    cavity_.clear();
    stack_.assign(1, seed);
    ++generation_;
    stamp_.resize(tris_.size() + 8, 0);
    stamp_[seed] = generation_;
    while (!stack_.empty()) {
      int t = stack_.back();
      stack_.pop_back();
      cavity_.push_back(t);
      for (int i = 0; i < 3; ++i) {
        int nb = tris_[t].nbr[i];
        if (nb < 0 || stamp_[nb] == generation_) continue;
        const Tri& tn = tris_[nb];
        if (incircle(pts_[tn.v[0]], pts_[tn.v[1]], pts_[tn.v[2]], p) >
            local_eps(nb, p)) {
          stamp_[nb] = generation_;
          stack_.push_back(nb);
        }
      }
    }

    // Boundary edges of the cavity, each with its outside neighbor.
    rim_.clear();
    for (int t : cavity_) {
      for (int i = 0; i < 3; ++i) {
        int nb = tris_[t].nbr[i];
        if (nb >= 0 && stamp_[nb] == generation_) continue;
        rim_.push_back({tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3], nb});
      }
    }
    for (int t : cavity_) tris_[t].alive = false;

    // Fan from p to the rim. Edges are CCW seen from inside the cavity.
    int base = static_cast<int>(tris_.size());
    for (size_t i = 0; i < rim_.size(); ++i) {
      Tri nt;
      nt.v = {vi, rim_[i].a, rim_[i].b};
      nt.nbr = {rim_[i].outside, -1, -1};
      tris_.push_back(nt);
      if (rim_[i].outside >= 0) {
        Tri& out = tris_[rim_[i].outside];
        for (int k = 0; k < 3; ++k) {
          int a = out.v[(k + 1) % 3], b = out.v[(k + 2) % 3];
          if ((a == rim_[i].b && b == rim_[i].a)) out.nbr[k] = base + static_cast<int>(i);
        }
      }
    }
    // Link fan triangles to each other via shared edges at p.
    for (size_t i = 0; i < rim_.size(); ++i) {
      for (size_t j = 0; j < rim_.size(); ++j) {
        if (i == j) continue;
        if (rim_[i].b == rim_[j].a) {
          tris_[base + i].nbr[1] = base + static_cast<int>(j); // edge (b, vi)
        }
        if (rim_[i].a == rim_[j].b) {
          tris_[base + i].nbr[2] = base + static_cast<int>(j); // edge (vi, a)
        }
      }
    }
    last_ = base;
  }

  std::vector<Vec2> pts_;
  std::vector<Tri> tris_;
  std::array<int, 3> super_{};
  int last_ = 0;
  std::vector<int> cavity_, stack_;
  std::vector<unsigned> stamp_;
  unsigned generation_ = 0;
  struct RimEdge {
    int a, b, outside;
  };
  std::vector<RimEdge> rim_;
};

} // namespace

std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<Vec2>& points) {
  if (points.size() < 3) throw Error("delaunay: need at least 3 points");
  Triangulator tr(points);
  tr.insert_all();
  return tr.extract();
}

} // namespace ringflow::detail
