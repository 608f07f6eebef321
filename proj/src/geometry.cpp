#include "cockedhat/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "cockedhat/errors.hpp"

namespace cockedhat {

double normalize_angle(double theta) {
  double r = std::remainder(theta, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

double ccw_sweep(double from, double to) {
  double r = std::fmod(to - from, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

Angle Angle::toward(Point2 from, Point2 to) {
  const Point2 d = to - from;
  return Angle(std::atan2(d.y, d.x));
}

double angular_distance(Angle a, Angle b) { return std::abs(normalize_angle(a.radians() - b.radians())); }

int orientation(Point2 a, Point2 b, Point2 c) {
  const double d2 = std::max({dot(b - a, b - a), dot(c - a, c - a), dot(c - b, c - b)});
  if (d2 == 0.0) return 0;
  const double area = cross(b - a, c - a);
  if (std::abs(area) <= kRelTol * d2) return 0;
  return area > 0.0 ? 1 : -1;
}

bool coincident(Point2 a, Point2 b, double scale) { return distance(a, b) <= kRelTol * scale; }

double diameter(std::span<const Point2> points) {
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) d = std::max(d, distance(points[i], points[j]));
  return d;
}

Ray true_ray(Point2 p, Point2 f) {
  if (p == f) throw DegenerateError("degenerate ray");
  return {p, Angle::toward(p, f)};
}

Ray apply_error(const Ray& r, Angle eps) { return {r.origin, r.direction + eps}; }

int halfplane_side(Point2 p, Point2 f, Point2 x) { return orientation(p, f, x); }

bool ray_contains(const Ray& r, Point2 x) {
  const Point2 v = x - r.origin;
  const double d = norm(v);
  if (d == 0.0) return false;
  const Point2 u = r.direction.unit();
  return std::abs(cross(u, v)) <= kRelTol * d && dot(u, v) > kRelTol * d;
}

std::optional<Point2> intersect_rays(const Ray& r1, const Ray& r2) {
  const Point2 u1 = r1.direction.unit();
  const Point2 u2 = r2.direction.unit();
  const Point2 w = r2.origin - r1.origin;
  const double scale = norm(w);
  const double denom = cross(u1, u2);

  if (std::abs(denom) <= kRelTol) {
    if (std::abs(cross(w, u1)) <= kRelTol * scale) throw DegenerateError("degenerate overlap");
    return std::nullopt;
  }
  // Distinct origins are guaranteed here: equal origins with non-parallel
  // directions meet only at the excluded origin.
  if (scale == 0.0) return std::nullopt;

  const double s = cross(w, u2) / denom;
  const double t = cross(w, u1) / denom;
  if (s <= kRelTol * scale || t <= kRelTol * scale) return std::nullopt;
  return r1.origin + s * u1;
}

std::optional<Point2> intersect_lines(const Line& l1, const Line& l2) {
  const Point2 u1 = l1.direction.unit();
  const Point2 u2 = l2.direction.unit();
  const double denom = cross(u1, u2);
  if (std::abs(denom) <= kRelTol) return std::nullopt;
  const double s = cross(l2.anchor - l1.anchor, u2) / denom;
  return l1.anchor + s * u1;
}

double signed_distance(const Line& l, Point2 x) { return cross(l.direction.unit(), x - l.anchor); }

Cone cone_between(Point2 apex, Angle d1, Angle d2) {
  const double delta = normalize_angle(d2.radians() - d1.radians());
  if (std::abs(delta) <= kAngleTol || std::abs(delta) >= kPi - kAngleTol) throw DegenerateError("improper cone");
  return delta > 0.0 ? Cone{apex, d1, d2} : Cone{apex, d2, d1};
}

bool cone_contains_direction(const Cone& c, Angle d) {
  const double off = ccw_sweep(c.start.radians(), d.radians());
  return off <= c.width() + kAngleTol || off >= kTwoPi - kAngleTol;
}

bool cone_contains_ray(const Cone& c, const Ray& r) {
  const double scale = std::max({1.0, norm(c.apex), norm(r.origin)});
  if (!coincident(c.apex, r.origin, scale)) throw std::invalid_argument("ray does not start at the cone apex");
  return cone_contains_direction(c, r.direction);
}

bool cone_within(const Cone& inner, const Cone& outer) {
  double off = ccw_sweep(outer.start.radians(), inner.start.radians());
  if (off >= kTwoPi - kAngleTol) off = 0.0;
  return off + inner.width() <= outer.width() + kAngleTol;
}

namespace {

std::optional<Triangle> triangle_from(const std::array<std::optional<Point2>, 3>& v, double scale) {
  for (const auto& p : v)
    if (!p) return std::nullopt;
  const Point2 a = *v[0], b = *v[1], c = *v[2];
  scale = std::max({scale, distance(a, b), distance(b, c), distance(a, c)});
  if (coincident(a, b, scale) || coincident(b, c, scale) || coincident(a, c, scale)) return std::nullopt;
  if (orientation(a, b, c) == 0) return std::nullopt;
  return Triangle{a, b, c};
}

}  // namespace

std::optional<Triangle> cocked_hat(const Ray& r1, const Ray& r2, const Ray& r3) {
  std::array<std::optional<Point2>, 3> v;
  try {
    v = {intersect_rays(r1, r2), intersect_rays(r2, r3), intersect_rays(r1, r3)};
  } catch (const DegenerateError&) {
    return std::nullopt;
  }
  const std::array<Point2, 3> origins{r1.origin, r2.origin, r3.origin};
  return triangle_from(v, diameter(origins));
}

std::optional<Triangle> line_triangle(const Line& l1, const Line& l2, const Line& l3) {
  const std::array<std::optional<Point2>, 3> v{intersect_lines(l1, l2), intersect_lines(l2, l3),
                                               intersect_lines(l1, l3)};
  return triangle_from(v, 0.0);
}

bool point_in_triangle(Point2 x, const Triangle& t) {
  const int s1 = orientation(t.a, t.b, x);
  const int s2 = orientation(t.b, t.c, x);
  const int s3 = orientation(t.c, t.a, x);
  return s1 != 0 && s1 == s2 && s2 == s3;
}

Point2 rotate(Point2 p, double radians) {
  const double c = std::cos(radians), s = std::sin(radians);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

std::string to_string(Point2 p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.6g, %.6g)", p.x, p.y);
  return buf;
}

}  // namespace cockedhat
