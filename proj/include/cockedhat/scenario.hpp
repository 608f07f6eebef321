#pragma once

#include <cstddef>
#include <vector>

#include "cockedhat/geometry.hpp"

namespace cockedhat {

/// Observation points P_1..P_n (stored 0-based) and the target F.
struct Scenario {
  std::vector<Point2> points;
  Point2 target;

  std::size_t size() const { return points.size(); }

  /// P_1..P_n followed by F.
  std::vector<Point2> all_points() const;

  double diameter() const;

  /// r_i, the ray from P_i toward F.
  Ray true_ray(std::size_t i) const { return cockedhat::true_ray(points.at(i), target); }
  Angle true_direction(std::size_t i) const { return Angle::toward(points.at(i), target); }

  /// The same scenario rotated by `radians` about the origin.
  Scenario rotated(double radians) const;
};

/// C_ij = cone(P_i, r_j, P_i -> P_j) with its parts
/// C_ij^- = cone(P_i, r_i, P_i -> P_j) and C_ij^+ = cone(P_i, r_i, r_j).
/// Throws DegenerateError when P_i, P_j, F are collinear or coincide.
ConeCij cone_c_ij(const Scenario& s, std::size_t i, std::size_t j);

}  // namespace cockedhat
