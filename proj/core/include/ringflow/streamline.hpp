#pragma once

#include <span>
#include <vector>

#include "ringflow/field.hpp"
#include "ringflow/geometry.hpp"

namespace ringflow {

class RidgeGraph; // ridge.hpp

struct TraceOptions {
  double rel_tol = 1e-7;        // relative step-error tolerance
  double snap_dist = -1.0;      // stop distance to the inner boundary; <0 = h/2
  double stagnation_speed = 1e-5;
  double stagnation_dwell = 2.0; // time allowed below the stagnation floor
  int max_steps = 200000;
  double max_time = 1000.0;
};

enum class Termination { reached_inner, stagnated, left_domain };

/// Time-parameterized ascending gradient-flow curve. Points are the
/// accepted integrator states; speeds are |grad u| sampled there.
struct Streamline {
  Vec2 seed{};
  std::vector<Vec2> points;
  std::vector<double> times;
  std::vector<double> speeds;
  Termination termination = Termination::stagnated;
  double total_time = 0.0;

  Vec2 position_at(double t) const; // linear interpolation in time
};

/// Integrates d(alpha)/dt = grad u(alpha) from the seed with an
/// embedded 4th/5th-order scheme until the curve comes within
/// snap distance of the inner boundary. Seeds at outer polygon
/// vertices (zero speed) are nudged h/4 along the inward bisector.
Streamline trace(const FieldSampler& sampler, const ConvexRing& ring, Vec2 seed,
                 const TraceOptions& opts = {});

/// Resampled run of u along a streamline. Speeds are per-interval
/// difference quotients of F (dF/dt = |grad u|^2 along the flow),
/// which filters element-scale sampling noise.
///
/// The violation figures skip intervals inside two zones the mesh
/// cannot resolve: a ball of radius `seam` around the first contact
/// with the ridge (the gradient has a kink across it) and the band
/// within `seam` of the inner boundary (where the point inner region
/// is regularized away). Both default to two mesh cells.
struct SpeedProfile {
  std::vector<double> t;            // n+1 node times
  std::vector<double> F;            // u(alpha(t)) at nodes
  std::vector<double> speed;        // n per-interval speeds
  std::vector<char> included;       // n flags: interval enters the violations
  double monotone_violation = 0.0;  // most negative speed increment, relative
  double convexity_violation = 0.0; // most negative second difference of F
};

SpeedProfile speed_profile(const Streamline& s, const ScalarField& field,
                           int n_intervals = 12, const RidgeGraph* ridge = nullptr,
                           double contact_tol = -1.0, double seam = -1.0);

struct MeetingEvent {
  Vec2 point{};
  int first = 0, second = 0;  // streamline indices
  double t_first = 0, t_second = 0;
};

/// Finds merge events: the earliest sample from which two curves stay
/// within `tol` of each other for the rest of the trace, sharing an
/// arc of at least 3 samples and 3 tolerances of length. With a mesh
/// and a positive `terminal_clearance`, shared stretches lying
/// entirely within that distance of the inner boundary are dropped:
/// around a small regularized inner region every curve ends almost at
/// the same point, which is not an arc merge. A transversal crossing
/// without merging throws IntegrityError, since exact flows cannot
/// cross.
std::vector<MeetingEvent> detect_meetings(std::span<const Streamline> streamlines,
                                          double tol,
                                          const TriangleMesh* mesh = nullptr,
                                          double terminal_clearance = 0.0);

struct PrefixReport {
  double t_meet = 0.0;      // first contact with the ridge (or T)
  double variation = 0.0;   // max relative speed deviation before t_meet
  bool met_ridge = false;
};

/// Speed variation along the streamline prefix before it first comes
/// within `tol` of the ridge: max |speed - speed(0)| / speed(0) over
/// per-interval F-based speeds resampled inside [0, t_meet]. Throws
/// TraceIncompleteError when the curve neither approaches the ridge
/// nor reaches the inner boundary.
PrefixReport constant_speed_prefix(const Streamline& s, const ScalarField& field,
                                   const RidgeGraph& ridge, double tol,
                                   int n_intervals = 12);

} // namespace ringflow
