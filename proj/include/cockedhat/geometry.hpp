#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>

namespace cockedhat {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Relative tolerance of every sign predicate. Quantities are normalized by
/// the diameter of the points involved before being compared with it.
inline constexpr double kRelTol = 1e-9;

/// Absolute tolerance on angles, in radians.
inline constexpr double kAngleTol = 1e-9;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2, Point2) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Reduces an angle to (-pi, pi]. The single canonical normalizer.
double normalize_angle(double theta);

/// Counterclockwise sweep from `from` to `to`, in [0, 2pi).
double ccw_sweep(double from, double to);

/// A direction or signed rotation, always stored normalized to (-pi, pi].
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : theta_(normalize_angle(radians)) {}

  static Angle degrees(double deg) { return Angle(deg * kPi / 180.0); }
  static Angle toward(Point2 from, Point2 to);

  constexpr double radians() const { return theta_; }
  double degrees_value() const { return theta_ * 180.0 / kPi; }
  Point2 unit() const { return {std::cos(theta_), std::sin(theta_)}; }

  friend Angle operator+(Angle a, Angle b) { return Angle(a.theta_ + b.theta_); }
  friend Angle operator-(Angle a, Angle b) { return Angle(a.theta_ - b.theta_); }
  Angle operator-() const { return Angle(-theta_); }
  friend constexpr bool operator==(Angle, Angle) = default;

 private:
  double theta_ = 0.0;
};

/// Smallest absolute angular difference between two directions, in [0, pi].
double angular_distance(Angle a, Angle b);

/// Half-line with an excluded origin: the origin is not a member.
struct Ray {
  Point2 origin;
  Angle direction;

  Point2 at(double t) const { return origin + t * direction.unit(); }
};

/// Undirected line; `direction` and `direction + pi` describe the same line.
struct Line {
  Point2 anchor;
  Angle direction;

  static Line through(const Ray& r) { return {r.origin, r.direction}; }
};

/// Convex cone swept counterclockwise from `start` to `end`, width in (0, pi).
struct Cone {
  Point2 apex;
  Angle start;
  Angle end;

  double width() const { return ccw_sweep(start.radians(), end.radians()); }
};

/// C_ij together with its two parts, which share the true ray from P_i.
struct ConeCij {
  Cone whole;
  Cone minus_part;
  Cone plus_part;
};

struct Triangle {
  Point2 a;
  Point2 b;
  Point2 c;
};

/// Orientation of (a, b, c): +1 counterclockwise, -1 clockwise, 0 when the
/// cross product is within kRelTol of the squared diameter of the triple.
int orientation(Point2 a, Point2 b, Point2 c);

/// True when the points coincide relative to `scale`.
bool coincident(Point2 a, Point2 b, double scale);

/// Largest pairwise distance in a point set.
double diameter(std::span<const Point2> points);

/// Ray from p toward f. Throws DegenerateError("degenerate ray") if p == f.
Ray true_ray(Point2 p, Point2 f);

/// Rotates the ray about its origin; eps > 0 turns it counterclockwise.
Ray apply_error(const Ray& r, Angle eps);

/// +1 when x lies counterclockwise of the directed line p -> f, -1 when
/// clockwise, 0 when collinear within tolerance.
int halfplane_side(Point2 p, Point2 f, Point2 x);

/// Membership on a ray with an excluded origin.
bool ray_contains(const Ray& r, Point2 x);

/// Common point of two rays, strictly interior to both. Empty for parallel
/// rays, for supporting lines that meet outside a ray, and for a meeting
/// point at either origin. Throws DegenerateError("degenerate overlap") when
/// the supporting lines coincide.
std::optional<Point2> intersect_rays(const Ray& r1, const Ray& r2);

/// Intersection of two lines; empty when parallel within tolerance.
std::optional<Point2> intersect_lines(const Line& l1, const Line& l2);

/// Signed distance from x to the line, positive on the counterclockwise side.
double signed_distance(const Line& l, Point2 x);

/// Cone of width < pi spanned by two directions. Throws
/// DegenerateError("improper cone") when they are equal or opposite.
Cone cone_between(Point2 apex, Angle d1, Angle d2);

/// Closed angular membership of a direction in the sweep of a cone.
bool cone_contains_direction(const Cone& c, Angle d);

/// True iff the ray's direction lies in the closed sweep. The ray must start
/// at the apex, otherwise throws std::invalid_argument.
bool cone_contains_ray(const Cone& c, const Ray& r);

/// Angular inclusion of `inner` in `outer` (apexes are not compared).
bool cone_within(const Cone& inner, const Cone& outer);

/// Triangle of the three pairwise intersection points, when all three exist
/// and are pairwise distinct and not collinear.
std::optional<Triangle> cocked_hat(const Ray& r1, const Ray& r2, const Ray& r3);

/// Triangle of the three supporting lines, when they form one.
std::optional<Triangle> line_triangle(const Line& l1, const Line& l2, const Line& l3);

/// Strict interior membership.
bool point_in_triangle(Point2 x, const Triangle& t);

/// Rotates a point about the origin.
Point2 rotate(Point2 p, double radians);

std::string to_string(Point2 p);

}  // namespace cockedhat
