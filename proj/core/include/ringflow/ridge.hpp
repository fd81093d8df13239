#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ringflow/field.hpp"
#include "ringflow/geometry.hpp"
#include "ringflow/streamline.hpp"

namespace ringflow {

struct BoundarySample {
  double s = 0;        // arclength along the outer boundary
  Vec2 point{};
  Vec2 inward_normal{};
  double speed = 0;    // one-sided normal-derivative estimate of |grad u|
};

/// A local extremum of the boundary speed: an isolated point or a flat
/// closed subarc [s_lo, s_hi].
struct ExtremeArc {
  double s_lo = 0, s_hi = 0;
  Vec2 point_lo{}, point_hi{};
  double value = 0;
  bool is_flat = false;
  bool is_minimum = true;
};

struct BoundarySpeedProfile {
  std::vector<BoundarySample> samples; // ordered by arclength, closed
  std::vector<ExtremeArc> minima;
  std::vector<ExtremeArc> maxima;
  bool globally_flat = false;
  double flat_tol = 0;
  double total_length = 0;
  std::vector<double> vertex_params; // polygon vertices (empty for disks)
  // Arclength zone around each polygon vertex owned by that vertex
  // minimum; the one-sided estimator is unreliable inside it.
  double corner_zone = 0;
};

/// Samples |grad u| along the outer boundary as u(x + d n)/d with an
/// inward offset d <= mesh h, then finds alternating minima and maxima
/// with a flatness threshold of 1% of the profile range (flat arcs
/// need at least 5 samples).
BoundarySpeedProfile boundary_speed(const ScalarField& field, const ConvexRing& ring,
                                    int n_samples = 512);

/// Worst wrong-sign speed increment on the two half-edges of a polygon
/// edge split at its maximum. Zero in the continuum. Throws
/// DomainError for rings without polygon edges.
double edge_monotonicity_check(const BoundarySpeedProfile& profile, int edge_index);

/// The union of attracting streamlines: one trace per isolated
/// boundary-speed minimum, two per flat minimum arc (its endpoints).
class RidgeGraph {
public:
  RidgeGraph() = default;
  RidgeGraph(std::vector<Streamline> gammas, std::vector<MeetingEvent> merges,
             double index_cell);

  bool empty() const { return gammas_.empty(); }
  const std::vector<Streamline>& attracting() const { return gammas_; }
  const std::vector<MeetingEvent>& merges() const { return merges_; }
  double distance_to(Vec2 p) const;
  /// All polyline segments with the owning streamline index.
  std::vector<std::pair<std::pair<Vec2, Vec2>, int>> segments() const;

private:
  std::vector<Streamline> gammas_;
  std::vector<MeetingEvent> merges_;
  class Index;
  std::shared_ptr<const Index> index_;
};

/// Traces the attracting streamlines named by the profile minima and
/// assembles the ridge. Throws TraceIncompleteError when a trace
/// stalls before the inner boundary.
RidgeGraph build_ridge(const ScalarField& field, const GradientField& grad,
                       const ConvexRing& ring, const BoundarySpeedProfile& profile,
                       const TraceOptions& opts = {});

struct MeetingClassification {
  std::vector<int> on_ridge;  // indices into the meetings span
  std::vector<int> off_ridge;
};

/// Splits detected meetings by distance to the ridge versus tol.
MeetingClassification classify_meetings(std::span<const MeetingEvent> meetings,
                                        const RidgeGraph& ridge, double tol);

} // namespace ringflow
