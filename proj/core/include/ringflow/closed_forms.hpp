#pragma once

#include <limits>
#include <vector>

#include "ringflow/geometry.hpp"

namespace ringflow {

constexpr double p_infinity = std::numeric_limits<double>::infinity();

/// Radially symmetric potential on the ring a <= |x| <= R, taking the
/// value 1 at r = a and 0 at r = R, strictly decreasing in between.
struct RadialPotential {
  double p = 4.0;
  double inner_radius = 0.0;
  double outer_radius = 1.0;

  double value(double r) const;
  double speed(double r) const; // |u'(r)|
};

/// Potential value at radius r. p = 2 uses the logarithmic form, finite
/// p > 2 the power form with exponent (p-2)/(p-1), p = infinity the cone.
double radial_potential(double p, double a, double R, double r);

/// |u'(r)| in closed form; constant 1/(R-a) for p = infinity. Throws a
/// DomainError at r = 0 with a = 0 where the speed is unbounded.
double radial_speed(double p, double a, double R, double r);

/// Straight ridge of the square ring [-s,s]^2 with a point inner region:
/// the four half-diagonals from the corners to the center.
struct SquareRidgeOracle {
  double side_half = 1.0;
  /// Diagonal segments corner -> center.
  std::vector<std::pair<Vec2, Vec2>> segments() const;
  double distance_to(Vec2 p) const;
  bool on_ridge(Vec2 p, double tol = 1e-12) const;
};

SquareRidgeOracle square_ridge_oracle(double side_half);

} // namespace ringflow
