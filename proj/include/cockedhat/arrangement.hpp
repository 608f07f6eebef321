#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cockedhat/geometry.hpp"

namespace cockedhat {

/// Open counterclockwise arc of directions from `start` to `end`.
struct DirectionArc {
  Angle start;
  Angle end;
  double length = 0.0;

  static DirectionArc from_start(Angle start, double length);
  static DirectionArc centered(Angle center, double length);

  /// Open membership with kAngleTol slack at both endpoints.
  bool contains(Angle d) const;
  Angle midpoint() const { return Angle(start.radians() + 0.5 * length); }
};

/// Whether F lies in an unbounded component of an arrangement, with proof.
///
/// When unbounded, `witness_direction` is a direction whose ray from F misses
/// every line. When bounded, `covering` lists arcs whose union is the whole
/// circle of directions.
struct UnboundednessCertificate {
  bool unbounded = false;
  std::optional<Angle> witness_direction;
  std::optional<std::vector<DirectionArc>> covering;
};

/// Directions u for which the ray from f along u meets l: an open half-circle
/// centered on the foot-of-perpendicular direction. Throws
/// DegenerateError("target on line") when f lies on l.
DirectionArc hitting_arc(Point2 f, const Line& l);

/// Decides whether open arcs cover the circle. Abutting arcs leave their
/// shared endpoint uncovered. The witness is the midpoint of the largest gap.
UnboundednessCertificate arc_coverage(std::span<const DirectionArc> arcs);

UnboundednessCertificate in_unbounded_component(Point2 f, std::span<const Line> lines);

/// Independent check: the segment from f to f + M * dir crosses no line,
/// with M = 1e6 * (diameter of f and anchors + farthest line intersection).
bool far_point_oracle(Point2 f, std::span<const Line> lines, Angle dir);

/// Number of faces of the arrangement, by incremental insertion. Throws
/// DegenerateError("duplicate line") when two lines coincide.
std::size_t count_regions(std::span<const Line> lines);

}  // namespace cockedhat
