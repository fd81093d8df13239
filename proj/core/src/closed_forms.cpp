#include "ringflow/closed_forms.hpp"

#include <cmath>

#include "ringflow/errors.hpp"

namespace ringflow {

static void check_radial_args(double p, double a, double R, double r) {
  if (!(p >= 2.0)) throw DomainError("radial forms need p >= 2");
  if (!(R > a) || a < 0.0) throw DomainError("radii must satisfy 0 <= a < R");
  if (r < a - 1e-15 * R || r > R + 1e-15 * R)
    throw DomainError("radius outside [a, R]");
}

double radial_potential(double p, double a, double R, double r) {
  check_radial_args(p, a, R, r);
  r = std::clamp(r, a, R);
  if (std::isinf(p)) return (R - r) / (R - a);
  if (p == 2.0) {
    if (a == 0.0) throw DomainError("p = 2 has no bounded punctured-disk potential");
    return std::log(R / r) / std::log(R / a);
  }
  double k = (p - 2.0) / (p - 1.0);
  if (a == 0.0) return 1.0 - std::pow(r / R, k);
  return (std::pow(R, k) - std::pow(r, k)) / (std::pow(R, k) - std::pow(a, k));
}

double radial_speed(double p, double a, double R, double r) {
  check_radial_args(p, a, R, r);
  if (std::isinf(p)) return 1.0 / (R - a);
  if (r == 0.0) throw DomainError("radial speed is unbounded at r = 0");
  if (p == 2.0) {
    if (a == 0.0) throw DomainError("p = 2 has no bounded punctured-disk potential");
    return 1.0 / (r * std::log(R / a));
  }
  double k = (p - 2.0) / (p - 1.0);
  double denom = a == 0.0 ? std::pow(R, k) : std::pow(R, k) - std::pow(a, k);
  return k * std::pow(r, k - 1.0) / denom;
}

double RadialPotential::value(double r) const {
  return radial_potential(p, inner_radius, outer_radius, r);
}

double RadialPotential::speed(double r) const {
  return radial_speed(p, inner_radius, outer_radius, r);
}

std::vector<std::pair<Vec2, Vec2>> SquareRidgeOracle::segments() const {
  double s = side_half;
  return {{{s, s}, {0, 0}}, {{-s, s}, {0, 0}}, {{-s, -s}, {0, 0}}, {{s, -s}, {0, 0}}};
}

double SquareRidgeOracle::distance_to(Vec2 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (auto& [a, b] : segments()) best = std::min(best, point_segment_dist(p, a, b));
  return best;
}

bool SquareRidgeOracle::on_ridge(Vec2 p, double tol) const {
  return distance_to(p) <= tol;
}

SquareRidgeOracle square_ridge_oracle(double side_half) {
  if (!(side_half > 0.0)) throw DomainError("square half-side must be positive");
  return SquareRidgeOracle{side_half};
}

} // namespace ringflow
