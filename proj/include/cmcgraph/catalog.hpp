// Exact constant-mean-curvature graphs used as oracles and barriers:
// spherical and hyperbolic caps, circular cylinders, hyperbolic planes, and
// the rotational Lorentzian family S(c) generated by w(r; c).
#pragma once

#include "cmcgraph/domain.hpp"
#include "cmcgraph/mc_operator.hpp"

#include <string>
#include <vector>

namespace cmc {

enum class SurfaceKind { EuclideanCap, LorentzCap, EuclideanCylinder, LorentzCylinder, HyperbolicPlane };

std::string to_string(SurfaceKind k);

class ExactSurface {
 public:
  SurfaceKind kind() const { return kind_; }
  Signature signature() const;
  /// H for which q_residual of the surface's jets vanishes; found by
  /// testing both signs at construction.
  double signed_H() const { return signed_H_; }
  double vertical_offset() const { return offset_; }
  double rho() const { return rho_; }
  double half_width() const { return half_width_; }
  /// Sphere, hyperbolic-plane or cylinder radius.
  double radius() const;

  bool in_domain(const Point& p) const;
  double value(const Point& p) const;
  JetD jet(const Point& p) const;

  ExactSurface with_offset(double offset) const;

  friend ExactSurface euclidean_cap(double H, double rho);
  friend ExactSurface lorentz_cap(double H, double rho);
  friend ExactSurface euclidean_cylinder(double H, double half_width);
  friend ExactSurface lorentz_cylinder(double H);
  friend ExactSurface hyperbolic_plane(double H);

 private:
  ExactSurface(SurfaceKind kind, double H, double rho, double half_width);
  void resolve_sign(const Point& probe);
  JetD base_jet(const Point& p) const;

  SurfaceKind kind_;
  double abs_H_;
  double orientation_;  // +1, or -1 for the mirror image u -> -u
  double rho_ = 0.0;
  double half_width_ = 0.0;
  double signed_H_ = 0.0;
  double offset_ = 0.0;
};

/// Spherical cap of radius 1/|H| over the disk |p| <= rho, zero on |p| = rho.
/// Requires rho < 1/|H|. H > 0 hangs below the plane.
ExactSurface euclidean_cap(double H, double rho);
/// Piece of the hyperbolic plane of radius 1/|H|, zero on |p| = rho.
ExactSurface lorentz_cap(double H, double rho);
/// Cylinder of radius 1/(2|H|) with axis along x2, over |x1| <= half_width.
ExactSurface euclidean_cylinder(double H, double half_width);
ExactSurface lorentz_cylinder(double H);
ExactSurface hyperbolic_plane(double H);

double cap_value(const ExactSurface& s, const Point& p);
double cylinder_value(const ExactSurface& s, const Point& p);

/// Closed-form slope w'(r) of the rotational profile (negative-c branch).
double profile_slope(double H, double c, double r);
/// Closed-form w''(r).
double profile_second_derivative(double H, double c, double r);

struct RotationalProfile {
  double H = 0.0;
  double c = 0.0;
  double r0 = 0.0;  // sqrt(-c/H), where w' vanishes and w = 0
  std::vector<double> r_values;   // increasing, from r_min to r0
  std::vector<double> w_values;
  std::vector<double> dw_values;  // closed-form w' at each node
  double xi_estimate = 0.0;       // extrapolated lim_{r->0} w

  double r_min() const { return r_values.front(); }
  /// w at any r in [r_min, r0].
  double w_at(double r) const;
  /// Jet of the rotationally symmetric graph at p, |p| in [r_min, r0].
  JetD jet(const Point& p) const;
};

/// Integrates w' from r0 down to r_min (w(r0) = 0) with a fourth-order rule.
RotationalProfile integrate_profile(double H, double c, double r_min);

struct FamilyEntry {
  double c;
  double r0;
  double xi;
};

std::vector<FamilyEntry> profile_family_limits(double H, const std::vector<double>& c_list);

struct Barrier {
  RotationalProfile profile;
  double exterior_radius;  // epsilon of the exterior circle condition
  double diameter;
  double K;
  double w_at_exterior;    // w(epsilon; c)
};

/// Finds c (starting at -1, doubling) with r0(c) > diam and w(epsilon; c) > K.
Barrier barrier_for_domain(const Domain& domain, double H, double K);

}  // namespace cmc
