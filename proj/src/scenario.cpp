#include "cockedhat/scenario.hpp"

#include <stdexcept>

#include "cockedhat/errors.hpp"

namespace cockedhat {

std::vector<Point2> Scenario::all_points() const {
  std::vector<Point2> all = points;
  all.push_back(target);
  return all;
}

double Scenario::diameter() const { return cockedhat::diameter(all_points()); }

Scenario Scenario::rotated(double radians) const {
  Scenario out;
  for (const auto& p : points) out.points.push_back(rotate(p, radians));
  out.target = rotate(target, radians);
  return out;
}

ConeCij cone_c_ij(const Scenario& s, std::size_t i, std::size_t j) {
  if (i == j || i >= s.size() || j >= s.size()) throw std::invalid_argument("cone_c_ij: need distinct valid indices");
  const Point2 pi = s.points[i], pj = s.points[j];
  if (orientation(pi, pj, s.target) == 0) throw DegenerateError("general position violated: P_i, P_j, F collinear");

  const Angle ri = s.true_direction(i);
  const Angle rj = s.true_direction(j);
  const Angle toward_j = Angle::toward(pi, pj);
  return {cone_between(pi, rj, toward_j), cone_between(pi, ri, toward_j), cone_between(pi, ri, rj)};
}

}  // namespace cockedhat
