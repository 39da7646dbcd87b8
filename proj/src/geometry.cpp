#include "subres/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "subres/errors.hpp"

namespace subres {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMetricSamples = 1024;
constexpr int kCoarseSamples = 256;

Vec2 rotate(const Vec2& v, double c, double s) { return {c * v.x() - s * v.y(), s * v.x() + c * v.y()}; }

// Golden-section minimization of f on [lo, hi].
template <class Fn>
double golden_min(Fn&& f, double lo, double hi, int iters = 60) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int k = 0; k < iters; ++k) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::string to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::circle:
      return "circle";
    case CurveKind::ellipse:
      return "ellipse";
    case CurveKind::star:
      return "star";
  }
  return "unknown";
}

BoundaryCurve::BoundaryCurve(CurveKind kind, Vec2 center, double a, double b, double rot, double eps,
                             int lobes)
    : kind_(kind), center_(center), a_(a), b_(b), rot_(rot), eps_(eps), lobes_(lobes) {
  if (!center.allFinite() || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(rot) ||
      !std::isfinite(eps)) {
    throw ConfigError("curve parameters must be finite");
  }
}

BoundaryCurve BoundaryCurve::circle(Vec2 center, double radius) {
  if (!(radius > 0.0)) throw ConfigError("circle radius must be positive");
  BoundaryCurve c(CurveKind::circle, center, radius, radius, 0.0, 0.0, 0);
  c.finalize();
  return c;
}

BoundaryCurve BoundaryCurve::ellipse(Vec2 center, double p, double q, double rotation) {
  // A negative semi-axis reverses orientation; store magnitudes so the
  // parametrization stays counterclockwise.
  p = std::abs(p);
  q = std::abs(q);
  if (!(p > 0.0) || !(q > 0.0)) throw ConfigError("ellipse semi-axes must be nonzero");
  BoundaryCurve c(CurveKind::ellipse, center, p, q, rotation, 0.0, 0);
  c.finalize();
  return c;
}

BoundaryCurve BoundaryCurve::star(Vec2 center, double r0, double eps, int lobes) {
  if (!(r0 > 0.0)) throw ConfigError("star base radius must be positive");
  if (!(std::abs(eps) < 1.0)) throw ConfigError("star amplitude must satisfy |eps| < 1");
  if (lobes < 0) throw ConfigError("star lobe count must be non-negative");
  BoundaryCurve c(CurveKind::star, center, r0, r0, 0.0, eps, lobes);
  c.finalize();
  return c;
}

void BoundaryCurve::finalize() {
  perimeter_ = perimeter_trapezoid(*this, kMetricSamples);
  area_ = area_green(*this, kMetricSamples);
  std::vector<Vec2> pts(kCoarseSamples);
  for (int k = 0; k < kCoarseSamples; ++k) pts[k] = point(kTwoPi * k / kCoarseSamples);
  double d = 0.0;
  for (int i = 0; i < kCoarseSamples; ++i)
    for (int j = i + 1; j < kCoarseSamples; ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  diameter_ = d;
}

CurveSample BoundaryCurve::eval(double theta) const {
  CurveSample s;
  const double ct = std::cos(theta), st = std::sin(theta);
  switch (kind_) {
    case CurveKind::circle:
      s.point = center_ + a_ * Vec2(ct, st);
      s.tangent = a_ * Vec2(-st, ct);
      s.second = -a_ * Vec2(ct, st);
      break;
    case CurveKind::ellipse: {
      const double cr = std::cos(rot_), sr = std::sin(rot_);
      s.point = center_ + rotate(Vec2(a_ * ct, b_ * st), cr, sr);
      s.tangent = rotate(Vec2(-a_ * st, b_ * ct), cr, sr);
      s.second = rotate(Vec2(-a_ * ct, -b_ * st), cr, sr);
      break;
    }
    case CurveKind::star: {
      const double k = lobes_;
      const double rho = a_ * (1.0 + eps_ * std::cos(k * theta));
      const double drho = -a_ * eps_ * k * std::sin(k * theta);
      const double d2rho = -a_ * eps_ * k * k * std::cos(k * theta);
      const Vec2 er(ct, st), et(-st, ct);
      s.point = center_ + rho * er;
      s.tangent = drho * er + rho * et;
      s.second = (d2rho - rho) * er + 2.0 * drho * et;
      break;
    }
  }
  s.speed = s.tangent.norm();
  s.normal = Vec2(s.tangent.y(), -s.tangent.x()) / s.speed;
  return s;
}

bool BoundaryCurve::contains(const Vec2& p) const {
  const Vec2 d = p - center_;
  switch (kind_) {
    case CurveKind::circle:
      return d.norm() < a_;
    case CurveKind::ellipse: {
      const Vec2 u = rotate(d, std::cos(rot_), -std::sin(rot_));
      return (u.x() / a_) * (u.x() / a_) + (u.y() / b_) * (u.y() / b_) < 1.0;
    }
    case CurveKind::star: {
      const double ang = std::atan2(d.y(), d.x());
      return d.norm() < a_ * (1.0 + eps_ * std::cos(lobes_ * ang));
    }
  }
  return false;
}

double BoundaryCurve::distance_to(const Vec2& p) const {
  int best = 0;
  double bd = 1e300;
  for (int k = 0; k < kCoarseSamples; ++k) {
    const double d = (point(kTwoPi * k / kCoarseSamples) - p).norm();
    if (d < bd) {
      bd = d;
      best = k;
    }
  }
  const double h = kTwoPi / kCoarseSamples;
  const double t0 = kTwoPi * best / kCoarseSamples;
  const double t = golden_min([&](double s) { return (point(s) - p).norm(); }, t0 - h, t0 + h);
  return std::min(bd, (point(t) - p).norm());
}

double perimeter_trapezoid(const BoundaryCurve& c, int samples) {
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) sum += c.eval(kTwoPi * k / samples).speed;
  return sum * kTwoPi / samples;
}

double area_green(const BoundaryCurve& c, int samples) {
  double sum = 0.0;
  for (int k = 0; k < samples; ++k) {
    const auto s = c.eval(kTwoPi * k / samples);
    sum += s.point.x() * s.tangent.y() - s.point.y() * s.tangent.x();
  }
  return 0.5 * sum * kTwoPi / samples;
}

double curve_distance(const BoundaryCurve& a, const BoundaryCurve& b) {
  const int m = kCoarseSamples;
  std::vector<Vec2> pa(m), pb(m);
  for (int k = 0; k < m; ++k) {
    pa[k] = a.point(kTwoPi * k / m);
    pb[k] = b.point(kTwoPi * k / m);
  }
  std::vector<double> dmin(m, 1e300);
  std::vector<int> arg(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double d = (pa[i] - pb[j]).norm();
      if (d < dmin[i]) {
        dmin[i] = d;
        arg[i] = j;
      }
    }
  // Refine every local minimum in the first parameter, best few first.
  std::vector<int> cand;
  for (int i = 0; i < m; ++i) {
    if (dmin[i] <= dmin[(i + m - 1) % m] && dmin[i] <= dmin[(i + 1) % m]) cand.push_back(i);
  }
  std::sort(cand.begin(), cand.end(), [&](int x, int y) { return dmin[x] < dmin[y]; });
  if (cand.size() > 6) cand.resize(6);

  const double h = kTwoPi / m;
  double best = *std::min_element(dmin.begin(), dmin.end());
  for (int i : cand) {
    double t = kTwoPi * i / m, s = kTwoPi * arg[i] / m;
    double w = 2.0 * h;
    for (int it = 0; it < 40; ++it) {
      t = golden_min([&](double x) { return (a.point(x) - b.point(s)).norm(); }, t - w, t + w, 40);
      s = golden_min([&](double x) { return (a.point(t) - b.point(x)).norm(); }, s - w, s + w, 40);
      w = std::max(0.6 * w, 1e-9);
    }
    best = std::min(best, (a.point(t) - b.point(s)).norm());
  }
  return best;
}

double min_separation(const std::vector<BoundaryCurve>& curves) {
  double dmax = 0.0;
  for (const auto& c : curves) dmax = std::max(dmax, c.diameter());
  double best = 1e300;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    for (std::size_t j = i + 1; j < curves.size(); ++j) {
      const auto& a = curves[i];
      const auto& b = curves[j];
      const bool nested = a.contains(b.point(0.0)) || b.contains(a.point(0.0));
      const double d = nested ? 0.0 : curve_distance(a, b);
      if (nested || d < 1e-6 * dmax) {
        std::ostringstream os;
        os << "resonators " << i + 1 << " and " << j + 1 << " overlap or touch"
           << (nested ? " (boundaries cross or one contains the other)" : "") << "; separation " << d;
        throw ConfigError(os.str());
      }
      best = std::min(best, d);
    }
  }
  return best;
}

ResonatorSystem::ResonatorSystem(std::vector<BoundaryCurve> curves_in, double delta_in, int F_in, int Q_in)
    : curves(std::move(curves_in)), delta(delta_in), F(F_in), Q(Q_in) {
  if (curves.empty()) throw ConfigError("at least one resonator is required");
  if (!(delta > 0.0) || !(delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (F < 0) throw ConfigError("F must be non-negative");
  if (Q % 2 != 0) throw ConfigError("Q must be even");
  if (Q < auto_q(F)) throw ConfigError("Q must satisfy Q >= 4(F+4)");
  if (curves.size() >= 2) min_separation(curves);
}

bool ResonatorSystem::all_circles() const {
  return std::all_of(curves.begin(), curves.end(), [](const auto& c) { return c.kind() == CurveKind::circle; });
}

}  // namespace subres
