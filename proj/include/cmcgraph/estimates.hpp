// A-priori height and gradient estimates checked against discrete solutions.
#pragma once

#include "cmcgraph/discretization.hpp"
#include "cmcgraph/domain.hpp"
#include "cmcgraph/solver.hpp"

#include <string>
#include <utility>
#include <vector>

namespace cmc {

struct Check {
  std::string name;
  double bound = 0.0;
  double measured = 0.0;
  double slack = 0.0;  // >= 0 when the estimate holds exactly
  double tol = 0.0;
  bool pass = false;
};

Check make_check(std::string name, double bound, double measured, double slack, double tol);

struct ReportContext {
  std::string domain;
  double H = 0.0;
  Signature signature = Signature::Euclidean;
  double h = 0.0;
};

struct EstimateReport {
  ReportContext context;
  std::vector<Check> checks;

  bool all_pass() const;
  /// False when any recorded number is NaN.
  bool valid() const;
  const Check* find(const std::string& name) const;
};

/// Discretization budget for height checks: 2e-3 at h = 1/64, scaling as h^2.
double height_tolerance(double h);

/// min/max of the boundary data over `samples` boundary points.
std::pair<double, double> boundary_data_range(const Domain& domain, const BoundaryData& phi, int samples = 1024);

Check check_height_euclidean(const Grid& grid, const Field& field, const Domain& domain, double H,
                             const BoundaryData& phi = zero_boundary, int phi_samples = 1024);

/// Diameter bound (1/|H|)(sqrt(1 + diam^2 H^2 / 4) - 1).
double lorentz_diameter_bound(double diam, double H);
/// Strip bound (1/(2|H|))(sqrt(1 + Theta^2 H^2) - 1).
double lorentz_strip_bound(double theta, double H);

/// (diameter check, strip check).
std::pair<Check, Check> check_height_lorentz(const Grid& grid, const Field& field, const Domain& domain, double H,
                                             const BoundaryData& phi = zero_boundary, int phi_samples = 1024);

/// max|Du| over unknowns within 2h of the boundary.
double near_boundary_max_gradient(const Grid& grid, const Field& field, const Domain& domain);

Check check_gradient_boundary_max(const Grid& grid, const Field& field, const Domain& domain);

struct SerrinConstant {
  double C_normal;
  double du_bound;
};

/// Requires kappa_min > |H|.
SerrinConstant serrin_gradient_constant(const Domain& domain, double H);

/// Nodewise u_b <= u_a + 1e-8 for H_a < H_b on a shared grid.
Check check_comparison_pair(const Field& a, double H_a, const Field& b, double H_b);

/// All checks applicable to a converged solve.
EstimateReport verify_solution(const Domain& domain, const SolveOutcome& outcome,
                               const BoundaryData& phi = zero_boundary, int phi_samples = 1024);

}  // namespace cmc
