#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace subres {

using Vec2 = Eigen::Vector2d;

enum class CurveKind { circle, ellipse, star };

std::string to_string(CurveKind kind);

/// Position and derivatives of a parametrized curve at one parameter value.
struct CurveSample {
  Vec2 point;
  Vec2 tangent;  // x'(theta)
  Vec2 second;   // x''(theta)
  Vec2 normal;   // outward unit normal
  double speed;  // |x'(theta)|
};

/// Smooth closed 2pi-periodic curve, oriented counterclockwise.
///
/// Every supported family is star-shaped about its center, which makes
/// point containment exact.
class BoundaryCurve {
 public:
  static BoundaryCurve circle(Vec2 center, double radius);
  /// Semi-axes (p, q) along the rotated x and y axes.
  static BoundaryCurve ellipse(Vec2 center, double p, double q, double rotation = 0.0);
  /// Radius r0 * (1 + eps * cos(lobes * theta)), |eps| < 1.
  static BoundaryCurve star(Vec2 center, double r0, double eps, int lobes);

  CurveSample eval(double theta) const;
  Vec2 point(double theta) const { return eval(theta).point; }

  double perimeter() const { return perimeter_; }
  double area() const { return area_; }
  /// Largest distance across the curve (sampled).
  double diameter() const { return diameter_; }

  bool contains(const Vec2& p) const;
  double distance_to(const Vec2& p) const;

  CurveKind kind() const { return kind_; }
  const Vec2& center() const { return center_; }
  /// Circle radius, ellipse semi-axis p, or star base radius.
  double radius() const { return a_; }
  double semi_axis_q() const { return b_; }
  double rotation() const { return rot_; }
  double amplitude() const { return eps_; }
  int lobes() const { return lobes_; }

 private:
  BoundaryCurve(CurveKind kind, Vec2 center, double a, double b, double rot, double eps, int lobes);
  void finalize();

  CurveKind kind_;
  Vec2 center_;
  double a_ = 0.0, b_ = 0.0, rot_ = 0.0, eps_ = 0.0;
  int lobes_ = 0;
  double perimeter_ = 0.0, area_ = 0.0, diameter_ = 0.0;
};

/// Trapezoidal perimeter and Green's-theorem area with `samples` nodes.
double perimeter_trapezoid(const BoundaryCurve& c, int samples);
double area_green(const BoundaryCurve& c, int samples);

/// Smallest distance between two curves (sampling plus local refinement).
double curve_distance(const BoundaryCurve& a, const BoundaryCurve& b);

/// Minimum pairwise separation; throws ConfigError naming the first pair that
/// overlaps, nests, or touches.
double min_separation(const std::vector<BoundaryCurve>& curves);

/// N disjoint resonators plus contrast and discretization parameters.
struct ResonatorSystem {
  std::vector<BoundaryCurve> curves;
  double delta = 1e-5;
  int F = 3;
  int Q = 28;

  /// Validates delta, F, Q and disjointness.
  ResonatorSystem(std::vector<BoundaryCurve> curves, double delta, int F, int Q);

  int size() const { return static_cast<int>(curves.size()); }
  int modes() const { return 2 * F + 1; }
  bool all_circles() const;

  /// Q = 4(F+4) rounded up to even.
  static int auto_q(int F) { return 4 * (F + 4); }
};

}  // namespace subres
