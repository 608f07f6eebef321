#include "cockedhat/arrangement.hpp"

#include <algorithm>

#include "cockedhat/errors.hpp"

namespace cockedhat {

DirectionArc DirectionArc::from_start(Angle start, double length) {
  return {start, Angle(start.radians() + length), length};
}

DirectionArc DirectionArc::centered(Angle center, double length) {
  return from_start(Angle(center.radians() - 0.5 * length), length);
}

bool DirectionArc::contains(Angle d) const {
  const double off = ccw_sweep(start.radians(), d.radians());
  return off > kAngleTol && off < length - kAngleTol;
}

DirectionArc hitting_arc(Point2 f, const Line& l) {
  const double sd = signed_distance(l, f);
  const double scale = distance(f, l.anchor);
  if (std::abs(sd) <= kRelTol * scale) throw DegenerateError("target on line");
  // f on the counterclockwise side means the line lies clockwise of it.
  const Angle normal(l.direction.radians() + (sd > 0.0 ? -0.5 : 0.5) * kPi);
  return DirectionArc::centered(normal, kPi);
}

UnboundednessCertificate arc_coverage(std::span<const DirectionArc> arcs) {
  if (arcs.empty()) return {true, Angle(0.0), std::nullopt};

  // The complement of a union of open arcs is closed, so if it is non-empty
  // it contains the counterclockwise end of some arc.
  double best_gap = -1.0;
  Angle best_from;
  for (const auto& a : arcs) {
    const Angle e = a.end;
    const bool covered = std::any_of(arcs.begin(), arcs.end(), [&](const DirectionArc& b) { return b.contains(e); });
    if (covered) continue;
    double gap = kTwoPi;
    for (const auto& b : arcs) {
      double off = ccw_sweep(e.radians(), b.start.radians());
      if (off >= kTwoPi - kAngleTol) off = 0.0;
      gap = std::min(gap, off);
    }
    if (gap > best_gap) {
      best_gap = gap;
      best_from = e;
    }
  }
  if (best_gap < 0.0) return {false, std::nullopt, std::vector<DirectionArc>(arcs.begin(), arcs.end())};
  return {true, Angle(best_from.radians() + 0.5 * best_gap), std::nullopt};
}

UnboundednessCertificate in_unbounded_component(Point2 f, std::span<const Line> lines) {
  std::vector<DirectionArc> arcs;
  arcs.reserve(lines.size());
  for (const auto& l : lines) arcs.push_back(hitting_arc(f, l));
  return arc_coverage(arcs);
}

bool far_point_oracle(Point2 f, std::span<const Line> lines, Angle dir) {
  double extent = 0.0;
  for (const auto& l : lines) extent = std::max(extent, distance(f, l.anchor));
  double farthest = 0.0;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j)
      if (auto p = intersect_lines(lines[i], lines[j])) farthest = std::max(farthest, distance(f, *p));
  const double reach = 1e6 * (extent + farthest);
  const Point2 g = f + reach * dir.unit();

  for (const auto& l : lines) {
    const double a = signed_distance(l, f);
    const double b = signed_distance(l, g);
    if (b == 0.0 || (a > 0.0) != (b > 0.0)) return false;
  }
  return true;
}

std::size_t count_regions(std::span<const Line> lines) {
  double scale = 1.0;
  for (const auto& l : lines) scale = std::max(scale, norm(l.anchor));

  std::size_t regions = 1;
  std::vector<Point2> hits;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    hits.clear();
    for (std::size_t j = 0; j < i; ++j) {
      auto p = intersect_lines(lines[i], lines[j]);
      if (!p) {
        if (std::abs(signed_distance(lines[j], lines[i].anchor)) <= kRelTol * scale)
          throw DegenerateError("duplicate line");
        continue;
      }
      const double local = std::max(scale, norm(*p));
      const bool seen = std::any_of(hits.begin(), hits.end(), [&](Point2 q) { return coincident(*p, q, local); });
      if (!seen) hits.push_back(*p);
    }
    regions += hits.size() + 1;
  }
  return regions;
}

}  // namespace cockedhat
