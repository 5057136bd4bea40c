#include "cmcgraph/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cmc {

namespace {

double sign_of(double x) { return x < 0 ? -1.0 : 1.0; }

// Radial graph jet from g = f'(r)/r and k = (f'' - f'/r)/r^2, both regular
// at r = 0 for the spheres and hyperbolic planes.
JetD radial_jet(const Point& p, double u, double g, double k) {
  JetD j;
  j.u = u;
  j.du = g * p;
  j.d11 = g + k * p.x() * p.x();
  j.d12 = k * p.x() * p.y();
  j.d22 = g + k * p.y() * p.y();
  return j;
}

}  // namespace

std::string to_string(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::EuclideanCap: return "euclid-cap";
    case SurfaceKind::LorentzCap: return "lorentz-cap";
    case SurfaceKind::EuclideanCylinder: return "euclid-cylinder";
    case SurfaceKind::LorentzCylinder: return "lorentz-cylinder";
    case SurfaceKind::HyperbolicPlane: return "hyperbolic-plane";
  }
  return "?";
}

ExactSurface::ExactSurface(SurfaceKind kind, double H, double rho, double half_width)
    : kind_(kind), abs_H_(std::abs(H)), orientation_(sign_of(H)), rho_(rho), half_width_(half_width) {
  if (!(abs_H_ > 0.0) || !std::isfinite(H)) throw std::invalid_argument("exact surface needs finite H != 0");
}

Signature ExactSurface::signature() const {
  return kind_ == SurfaceKind::EuclideanCap || kind_ == SurfaceKind::EuclideanCylinder ? Signature::Euclidean
                                                                                        : Signature::Lorentzian;
}

double ExactSurface::radius() const {
  if (kind_ == SurfaceKind::EuclideanCylinder || kind_ == SurfaceKind::LorentzCylinder) return 0.5 / abs_H_;
  return 1.0 / abs_H_;
}

bool ExactSurface::in_domain(const Point& p) const {
  switch (kind_) {
    case SurfaceKind::EuclideanCap:
    case SurfaceKind::LorentzCap: return p.norm() <= rho_ * (1.0 + 1e-9);
    case SurfaceKind::EuclideanCylinder: return std::abs(p.x()) <= half_width_ * (1.0 + 1e-9);
    default: return true;
  }
}

JetD ExactSurface::base_jet(const Point& p) const {
  const double R = radius();
  switch (kind_) {
    case SurfaceKind::EuclideanCap: {
      const double s = std::sqrt(R * R - p.squaredNorm());
      const double g = 1.0 / s;
      return radial_jet(p, -s, g, g * g * g);
    }
    case SurfaceKind::LorentzCap:
    case SurfaceKind::HyperbolicPlane: {
      const double s = std::sqrt(R * R + p.squaredNorm());
      const double g = 1.0 / s;
      return radial_jet(p, s, g, -g * g * g);
    }
    case SurfaceKind::EuclideanCylinder: {
      const double s = std::sqrt(R * R - p.x() * p.x());
      JetD j;
      j.u = -s;
      j.du << p.x() / s, 0.0;
      j.d11 = R * R / (s * s * s);
      return j;
    }
    case SurfaceKind::LorentzCylinder: {
      const double s = std::sqrt(R * R + p.x() * p.x());
      JetD j;
      j.u = s;
      j.du << p.x() / s, 0.0;
      j.d11 = R * R / (s * s * s);
      return j;
    }
  }
  return {};
}

JetD ExactSurface::jet(const Point& p) const {
  if (!in_domain(p)) throw std::out_of_range(to_string(kind_) + ": point outside the surface's domain");
  JetD j = base_jet(p);
  j.u = orientation_ * j.u + offset_;
  j.du *= orientation_;
  j.d11 *= orientation_;
  j.d12 *= orientation_;
  j.d22 *= orientation_;
  return j;
}

double ExactSurface::value(const Point& p) const { return jet(p).u; }

ExactSurface ExactSurface::with_offset(double offset) const {
  ExactSurface s = *this;
  s.offset_ = offset;
  return s;
}

void ExactSurface::resolve_sign(const Point& probe) {
  const JetD j = jet(probe);
  const double plus = std::abs(q_residual(j, {abs_H_, signature()}));
  const double minus = std::abs(q_residual(j, {-abs_H_, signature()}));
  signed_H_ = plus <= minus ? abs_H_ : -abs_H_;
  if (std::min(plus, minus) > 1e-9) {
    throw std::logic_error(to_string(kind_) + ": neither sign of H annihilates the residual");
  }
}

ExactSurface euclidean_cap(double H, double rho) {
  ExactSurface s(SurfaceKind::EuclideanCap, H, rho, 0.0);
  if (!(rho > 0.0 && rho < 1.0 / std::abs(H))) throw std::invalid_argument("euclidean cap needs 0 < rho < 1/|H|");
  s.offset_ = -s.orientation_ * s.base_jet(Point(rho, 0.0)).u;
  s.resolve_sign(Point(0.3 * rho, 0.2 * rho));
  return s;
}

ExactSurface lorentz_cap(double H, double rho) {
  ExactSurface s(SurfaceKind::LorentzCap, H, rho, 0.0);
  if (!(rho > 0.0)) throw std::invalid_argument("lorentz cap needs rho > 0");
  s.offset_ = -s.orientation_ * s.base_jet(Point(rho, 0.0)).u;
  s.resolve_sign(Point(0.3 * rho, -0.2 * rho));
  return s;
}

ExactSurface euclidean_cylinder(double H, double half_width) {
  ExactSurface s(SurfaceKind::EuclideanCylinder, H, 0.0, half_width);
  if (!(half_width > 0.0 && half_width < 0.5 / std::abs(H)))
    throw std::invalid_argument("euclidean cylinder needs 0 < half_width < 1/(2|H|)");
  s.resolve_sign(Point(0.5 * half_width, 0.1));
  return s;
}

ExactSurface lorentz_cylinder(double H) {
  ExactSurface s(SurfaceKind::LorentzCylinder, H, 0.0, 0.0);
  s.resolve_sign(Point(0.4 / std::abs(H), 0.1));
  return s;
}

ExactSurface hyperbolic_plane(double H) {
  ExactSurface s(SurfaceKind::HyperbolicPlane, H, 0.0, 0.0);
  s.resolve_sign(Point(0.7, -0.4));
  return s;
}

double cap_value(const ExactSurface& s, const Point& p) {
  if (s.kind() != SurfaceKind::EuclideanCap && s.kind() != SurfaceKind::LorentzCap &&
      s.kind() != SurfaceKind::HyperbolicPlane) {
    throw std::invalid_argument("cap_value: not a cap");
  }
  return s.value(p);
}

double cylinder_value(const ExactSurface& s, const Point& p) {
  if (s.kind() != SurfaceKind::EuclideanCylinder && s.kind() != SurfaceKind::LorentzCylinder) {
    throw std::invalid_argument("cylinder_value: not a cylinder");
  }
  return s.value(p);
}

// ------------------------------------------------------------- profiles --

double profile_slope(double H, double c, double r) {
  const double a = H * r * r + c;
  return a / std::sqrt(r * r + a * a);
}

double profile_second_derivative(double H, double c, double r) {
  const double a = H * r * r + c;
  const double s = std::sqrt(r * r + a * a);
  return r * (H * r * r - c) / (s * s * s);
}

namespace {

void check_profile_args(double H, double c) {
  if (!(H > 0.0)) throw std::invalid_argument("rotational profile needs H > 0");
  if (!(c < 0.0)) throw std::invalid_argument("rotational profile needs c < 0 (c = 0 is the hyperbolic plane)");
}

// Fourth-order (Simpson/RK4) quadrature of w' from r0 down to r_min.
RotationalProfile integrate_raw(double H, double c, double r_min) {
  check_profile_args(H, c);
  RotationalProfile p;
  p.H = H;
  p.c = c;
  p.r0 = std::sqrt(-c / H);
  if (!(r_min > 0.0 && r_min < p.r0)) throw std::invalid_argument("rotational profile needs 0 < r_min < r0");
  const double base = (p.r0 - r_min) / 2000.0;
  std::vector<double> r{p.r0}, w{0.0};
  double cur = p.r0, wc = 0.0;
  while (cur > r_min) {
    const double step = std::abs(profile_slope(H, c, cur)) > 0.99 ? 0.5 * base : base;
    double next = cur - step;
    if (next < r_min + 1e-9 * base) next = r_min;
    const double dr = cur - next;
    wc -= dr / 6.0 *
          (profile_slope(H, c, cur) + 4.0 * profile_slope(H, c, cur - 0.5 * dr) + profile_slope(H, c, next));
    cur = next;
    r.push_back(cur);
    w.push_back(wc);
  }
  std::reverse(r.begin(), r.end());
  std::reverse(w.begin(), w.end());
  p.r_values = std::move(r);
  p.w_values = std::move(w);
  p.dw_values.reserve(p.r_values.size());
  for (double x : p.r_values) p.dw_values.push_back(profile_slope(H, c, x));
  return p;
}

// Richardson extrapolation of w(r_min) over r_min in {1e-2, 1e-3, 1e-4} r0,
// with the order estimated from the three samples.
double extrapolate_xi(double H, double c) {
  const double r0 = std::sqrt(-c / H);
  const double w1 = integrate_raw(H, c, 1e-2 * r0).w_values.front();
  const double w2 = integrate_raw(H, c, 1e-3 * r0).w_values.front();
  const double w3 = integrate_raw(H, c, 1e-4 * r0).w_values.front();
  double ratio = 10.0;
  if (w2 - w3 != 0.0 && (w1 - w2) / (w2 - w3) > 1.0) ratio = (w1 - w2) / (w2 - w3);
  return w3 + (w3 - w2) / (ratio - 1.0);
}

}  // namespace

double RotationalProfile::w_at(double r) const {
  if (!(r >= r_min() - 1e-14 && r <= r0 + 1e-14)) throw std::out_of_range("profile: r outside [r_min, r0]");
  const auto it = std::lower_bound(r_values.begin(), r_values.end(), r);
  std::size_t k = static_cast<std::size_t>(it - r_values.begin());
  if (k >= r_values.size()) k = r_values.size() - 1;
  const double rk = r_values[k];
  const double dr = r - rk;  // <= 0
  return w_values[k] +
         dr / 6.0 * (profile_slope(H, c, rk) + 4.0 * profile_slope(H, c, rk + 0.5 * dr) + profile_slope(H, c, r));
}

JetD RotationalProfile::jet(const Point& p) const {
  const double r = p.norm();
  const double d1 = profile_slope(H, c, r);
  const double d2 = profile_second_derivative(H, c, r);
  const double g = d1 / r;
  const double k = (d2 - g) / (r * r);
  return radial_jet(p, w_at(r), g, k);
}

RotationalProfile integrate_profile(double H, double c, double r_min) {
  RotationalProfile p = integrate_raw(H, c, r_min);
  p.xi_estimate = extrapolate_xi(H, c);
  return p;
}

std::vector<FamilyEntry> profile_family_limits(double H, const std::vector<double>& c_list) {
  std::vector<FamilyEntry> out;
  for (double c : c_list) {
    check_profile_args(H, c);
    out.push_back({c, std::sqrt(-c / H), extrapolate_xi(H, c)});
  }
  return out;
}

Barrier barrier_for_domain(const Domain& domain, double H, double K) {
  if (!(H > 0.0) || !(K > 0.0)) throw std::invalid_argument("barrier_for_domain needs H > 0 and K > 0");
  const ExteriorCircle ext = exterior_circle_radius(domain);
  if (!ext.ok) throw GeometryError("barrier_for_domain: no uniform exterior circle");
  const double diam = diameter(domain);
  double c = -1.0;
  for (int it = 0; it <= 60; ++it, c *= 2.0) {
    const double r0 = std::sqrt(-c / H);
    if (!(r0 > diam && r0 > ext.radius)) continue;
    RotationalProfile prof = integrate_profile(H, c, ext.radius);
    const double w_eps = prof.w_values.front();
    if (w_eps > K) return {std::move(prof), ext.radius, diam, K, w_eps};
  }
  throw std::runtime_error("barrier_for_domain: no admissible c after 60 doublings");
}

}  // namespace cmc
