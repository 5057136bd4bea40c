#include "cmcgraph/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cmc {

Check make_check(std::string name, double bound, double measured, double slack, double tol) {
  return {std::move(name), bound, measured, slack, tol, slack >= -tol};
}

bool EstimateReport::all_pass() const {
  return std::ranges::all_of(checks, [](const Check& c) { return c.pass; });
}

bool EstimateReport::valid() const {
  return std::ranges::none_of(checks, [](const Check& c) {
    return std::isnan(c.bound) || std::isnan(c.measured) || std::isnan(c.slack) || std::isnan(c.tol);
  });
}

const Check* EstimateReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double height_tolerance(double h) { return 2e-3 * std::max(1.0, (64.0 * h) * (64.0 * h)); }

std::pair<double, double> boundary_data_range(const Domain& domain, const BoundaryData& phi, int samples) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& b : boundary_sample(domain, samples)) {
    const double v = phi(b.position);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

namespace {

std::pair<double, double> field_range(const Field& field) {
  if (field.values.size() == 0) return {0.0, 0.0};
  return {field.values.minCoeff(), field.values.maxCoeff()};
}

// Two-sided bound lower <= u <= upper, reported on the binding side.
Check two_sided(std::string name, const Field& field, double lower, double upper, double tol) {
  const auto [umin, umax] = field_range(field);
  const double s_low = umin - lower;
  const double s_up = upper - umax;
  if (s_low <= s_up) return make_check(std::move(name), lower, umin, s_low, tol);
  return make_check(std::move(name), upper, umax, s_up, tol);
}

}  // namespace

Check check_height_euclidean(const Grid& grid, const Field& field, const Domain& domain, double H,
                             const BoundaryData& phi, int phi_samples) {
  const auto [pmin, pmax] = boundary_data_range(domain, phi, phi_samples);
  double lower = pmin, upper = pmax;
  if (H > 0.0) lower -= 1.0 / H;
  if (H < 0.0) upper -= 1.0 / H;
  return two_sided("height_euclidean", field, lower, upper, height_tolerance(grid.h));
}

double lorentz_diameter_bound(double diam, double H) {
  const double a = std::abs(H);
  if (a == 0.0) return 0.0;
  return (std::sqrt(1.0 + diam * diam * a * a / 4.0) - 1.0) / a;
}

double lorentz_strip_bound(double theta, double H) {
  const double a = std::abs(H);
  if (a == 0.0) return 0.0;
  return (std::sqrt(1.0 + theta * theta * a * a) - 1.0) / (2.0 * a);
}

std::pair<Check, Check> check_height_lorentz(const Grid& grid, const Field& field, const Domain& domain, double H,
                                             const BoundaryData& phi, int phi_samples) {
  const auto [pmin, pmax] = boundary_data_range(domain, phi, phi_samples);
  const double tol = height_tolerance(grid.h);
  const double bd = lorentz_diameter_bound(diameter(domain), H);
  const double bs = lorentz_strip_bound(strip_stats(domain).min_width, H);
  return {two_sided("height_diameter", field, pmin - bd, pmax + bd, tol),
          two_sided("height_strip", field, pmin - bs, pmax + bs, tol)};
}

double near_boundary_max_gradient(const Grid& grid, const Field& field, const Domain& domain) {
  const auto g = gradients(grid, field);
  double m = 0.0;
  for (int k = 0; k < grid.unknown_count(); ++k) {
    const NodeStencil& st = grid.unknowns[k];
    const bool near = std::ranges::any_of(st.arms, [](const Arm& a) { return a.boundary >= 0; }) ||
                      boundary_distance(domain, grid.unknown_position(k)) <= 2.0 * grid.h;
    if (near) m = std::max(m, g[k].norm());
  }
  return m;
}

Check check_gradient_boundary_max(const Grid& grid, const Field& field, const Domain& domain) {
  const auto g = gradients(grid, field);
  double overall = 0.0, scale = 0.0;
  for (int k = 0; k < grid.unknown_count(); ++k) {
    overall = std::max(overall, g[k].norm());
    if (grid.node_class[grid.unknowns[k].node] == NodeClass::Interior) {
      const JetD j = jet_at(grid, field, k);
      scale = std::max(scale, j.hessian().cwiseAbs().rowwise().sum().maxCoeff());
    }
  }
  const double near = near_boundary_max_gradient(grid, field, domain);
  const double tol = 5.0 * grid.h * scale + 1e-12;
  return make_check("gradient_boundary_max", near, overall, near - overall, tol);
}

SerrinConstant serrin_gradient_constant(const Domain& domain, double H) {
  const CurvatureRange kr = curvature_range(domain);
  const double k = kr.kappa_min;
  if (kr.has_corners || !(k > std::abs(H))) {
    throw std::invalid_argument("serrin_gradient_constant: needs kappa_min > |H| on a smooth boundary");
  }
  const double C = std::sqrt(k * k - H * H) / k;
  return {C, std::sqrt(1.0 - C * C) / C};
}

Check check_comparison_pair(const Field& a, double H_a, const Field& b, double H_b) {
  if (a.values.size() != b.values.size()) throw std::invalid_argument("check_comparison_pair: grids differ");
  if (!(H_a <= H_b)) throw std::invalid_argument("check_comparison_pair: needs H_a <= H_b");
  const double violation = a.values.size() ? (b.values - a.values).maxCoeff() : 0.0;
  return make_check("comparison_pair", 0.0, violation, -violation, 1e-8);
}

EstimateReport verify_solution(const Domain& domain, const SolveOutcome& outcome, const BoundaryData& phi,
                               int phi_samples) {
  if (!outcome.grid) throw std::invalid_argument("verify_solution: outcome has no grid");
  const Grid& grid = *outcome.grid;
  EstimateReport rep;
  rep.context = {domain.describe(), outcome.H, outcome.signature, grid.h};
  if (outcome.signature == Signature::Euclidean) {
    rep.checks.push_back(check_height_euclidean(grid, outcome.field, domain, outcome.H, phi, phi_samples));
  } else {
    auto [d, s] = check_height_lorentz(grid, outcome.field, domain, outcome.H, phi, phi_samples);
    rep.checks.push_back(std::move(d));
    rep.checks.push_back(std::move(s));
  }
  rep.checks.push_back(check_gradient_boundary_max(grid, outcome.field, domain));
  if (outcome.signature == Signature::Euclidean && outcome.H != 0.0) {
    const CurvatureRange kr = curvature_range(domain);
    if (!kr.has_corners && kr.kappa_min > std::abs(outcome.H)) {
      const SerrinConstant sc = serrin_gradient_constant(domain, outcome.H);
      const double measured = near_boundary_max_gradient(grid, outcome.field, domain);
      rep.checks.push_back(make_check("serrin_gradient", sc.du_bound, measured, sc.du_bound - measured, 1e-2));
    }
  }
  return rep;
}

}  // namespace cmc
