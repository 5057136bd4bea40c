#include "cmcgraph/catalog.hpp"
#include "cmcgraph/estimates.hpp"

#include <doctest.h>

#include <cmath>

using namespace cmc;

namespace {

Domain unit_disk() { return Domain::disk({0, 0}, 1.0); }

SolveOutcome solve(const Domain& d, double H, Signature sig, double h, const BoundaryData& phi = zero_boundary) {
  auto o = solve_dirichlet(d, H, sig, phi, h);
  REQUIRE(o.converged());
  return o;
}

}  // namespace

TEST_CASE("check bookkeeping") {
  const Check c = make_check("x", 1.0, 0.5, -1e-4, 1e-3);
  CHECK(c.pass);
  CHECK_FALSE(make_check("x", 1.0, 0.5, -2e-3, 1e-3).pass);
  EstimateReport r;
  r.checks = {c};
  CHECK(r.valid());
  CHECK(r.all_pass());
  CHECK(r.find("x") != nullptr);
  CHECK(r.find("y") == nullptr);
  r.checks.push_back(make_check("y", std::nan(""), 0.0, 0.0, 1e-3));
  CHECK_FALSE(r.valid());
  CHECK(height_tolerance(1.0 / 64) == 2e-3);
  CHECK(height_tolerance(1.0 / 32) == doctest::Approx(8e-3));
}

TEST_CASE("euclidean height estimate") {
  const Domain d = unit_disk();
  const auto o = solve(d, 0.5, Signature::Euclidean, 1.0 / 32);
  const Check c = check_height_euclidean(*o.grid, o.field, d, 0.5);
  CHECK(c.pass);
  // Reported on the binding side, here u <= max phi = 0.
  CHECK(c.bound == 0.0);
  CHECK(c.slack >= 0.0);
  CHECK(o.field.values.minCoeff() == doctest::Approx(std::sqrt(3.0) - 2).epsilon(0.02));
  CHECK(o.field.values.minCoeff() >= -2.0);

  // t = 0 field: zero with bounds 0 <= u <= 0.
  const Grid g = build_grid(d, 1.0 / 32);
  const Check z = check_height_euclidean(g, zero_field(g), d, 0.0);
  CHECK(z.pass);
  CHECK(z.slack == 0.0);

  const auto phi = [](const Point& p) { return 0.1 * p.x(); };
  const auto m = solve(d, 0.0, Signature::Euclidean, 1.0 / 32, phi);
  const Check cm = check_height_euclidean(*m.grid, m.field, d, 0.0, phi);
  CHECK(cm.pass);
  CHECK(std::abs(std::abs(cm.bound) - 0.1) < 1e-6);
  CHECK(m.field.values.minCoeff() >= -0.1);
  CHECK(m.field.values.maxCoeff() <= 0.1);

  // Negative H mirrors the bound.
  const auto n = solve(d, -0.5, Signature::Euclidean, 1.0 / 32);
  const Check cn = check_height_euclidean(*n.grid, n.field, d, -0.5);
  CHECK(cn.pass);
  CHECK(n.field.values.minCoeff() >= -1e-10);
}

TEST_CASE("lorentzian height estimates") {
  CHECK(lorentz_diameter_bound(2.0, 0.5) == doctest::Approx(2 * (std::sqrt(1.25) - 1)));
  CHECK(lorentz_strip_bound(2.0, 0.5) == doctest::Approx(std::sqrt(2.0) - 1));
  CHECK(lorentz_diameter_bound(2.0, 0.0) == 0.0);

  const Domain d = unit_disk();
  const auto o = solve(d, 0.5, Signature::Lorentzian, 1.0 / 32);
  const auto [cd, cs] = check_height_lorentz(*o.grid, o.field, d, 0.5);
  CHECK(cd.pass);
  CHECK(cs.pass);
  // Equality case of the diameter bound.
  CHECK(std::abs(cd.slack) <= height_tolerance(1.0 / 32));
  CHECK(cs.slack > 0.1);
  CHECK(cd.slack < cs.slack);
}

TEST_CASE("strip bound dominates on a long thin domain") {
  const Domain d = Domain::ellipse(2.0, 0.25);
  CHECK(strip_stats(d).min_width == doctest::Approx(0.5).epsilon(1e-3));
  const auto o = solve(d, 1.0, Signature::Lorentzian, 1.0 / 64);
  const auto [cd, cs] = check_height_lorentz(*o.grid, o.field, d, 1.0);
  CHECK(std::abs(cs.bound) < std::abs(cd.bound));
  CHECK(std::abs(cs.bound) == doctest::Approx(0.5 * (std::sqrt(1.25) - 1)).epsilon(1e-3));
  CHECK(std::abs(cd.bound) == doctest::Approx(std::sqrt(5.0) - 1).epsilon(1e-3));
  CHECK(cs.pass);
  CHECK(cd.pass);
  CHECK(o.field.values.cwiseAbs().maxCoeff() <= 0.5 * (std::sqrt(1.25) - 1) + 2e-3);
}

TEST_CASE("gradient attains its maximum near the boundary") {
  const Domain d = unit_disk();
  for (Signature sig : {Signature::Euclidean, Signature::Lorentzian}) {
    const auto o = solve(d, 0.5, sig, 1.0 / 32);
    const Check c = check_gradient_boundary_max(*o.grid, o.field, d);
    CHECK(c.pass);
    CHECK(c.slack >= 0.0);
  }
  const Grid g = build_grid(d, 1.0 / 32);
  const Check z = check_gradient_boundary_max(g, zero_field(g), d);
  CHECK(z.pass);
  CHECK(z.measured == 0.0);
  CHECK(z.bound == 0.0);
}

TEST_CASE("serrin gradient constant") {
  const Domain d = unit_disk();
  auto s = serrin_gradient_constant(d, 0.5);
  CHECK(s.C_normal == doctest::Approx(std::sqrt(0.75)).epsilon(1e-6));
  CHECK(s.du_bound == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-6));
  s = serrin_gradient_constant(d, 0.25);
  CHECK(s.C_normal == doctest::Approx(std::sqrt(1 - 0.0625)).epsilon(1e-6));
  CHECK(s.du_bound == doctest::Approx(0.25 / std::sqrt(1 - 0.0625)).epsilon(1e-6));
  CHECK_THROWS_AS(serrin_gradient_constant(d, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(serrin_gradient_constant(Domain::rectangle({0, 0}, 1, 1), 0.1), std::invalid_argument);

  // The cap attains the bound at the boundary.
  for (double H : {0.25, 0.5}) {
    const auto o = solve(d, H, Signature::Euclidean, 1.0 / 32);
    const double bound = serrin_gradient_constant(d, H).du_bound;
    const double cap_edge = 1.0 / std::sqrt(1.0 / (H * H) - 1.0);
    CHECK(bound == doctest::Approx(cap_edge).epsilon(1e-9));
    CHECK(std::abs(near_boundary_max_gradient(*o.grid, o.field, d) - bound) <= 1e-2);
  }
}

TEST_CASE("comparison pairs") {
  const Domain d = unit_disk();
  const auto a = solve(d, 0.2, Signature::Euclidean, 1.0 / 32);
  const auto b = solve(d, 0.4, Signature::Euclidean, 1.0 / 32);
  const Check c = check_comparison_pair(a.field, 0.2, b.field, 0.4);
  CHECK(c.pass);
  CHECK(c.measured < 0.0);
  CHECK_FALSE(check_comparison_pair(b.field, 0.2, a.field, 0.4).pass);
  CHECK_THROWS_AS(check_comparison_pair(a.field, 0.4, b.field, 0.2), std::invalid_argument);

  const auto a2 = solve(d, 0.2, Signature::Euclidean, 1.0 / 32);
  CHECK((a2.field.values - a.field.values).lpNorm<Eigen::Infinity>() <= 2 * a.newton_tol);

  // Lorentzian: the deeper solution belongs to the larger |H|, with the
  // solver's sign convention (u <= 0 for H > 0).
  const auto la = solve(d, 0.5, Signature::Lorentzian, 1.0 / 32);
  const auto lb = solve(d, 1.0, Signature::Lorentzian, 1.0 / 32);
  CHECK(la.field.values.maxCoeff() <= 1e-10);
  CHECK(lb.field.values.cwiseAbs().maxCoeff() > la.field.values.cwiseAbs().maxCoeff());
  CHECK(check_comparison_pair(la.field, 0.5, lb.field, 1.0).pass);
}

TEST_CASE("verify_solution assembles the applicable checks") {
  const Domain d = unit_disk();
  auto rep = verify_solution(d, solve(d, 0.5, Signature::Euclidean, 1.0 / 32));
  CHECK(rep.valid());
  CHECK(rep.all_pass());
  CHECK(rep.find("height_euclidean"));
  CHECK(rep.find("gradient_boundary_max"));
  CHECK(rep.find("serrin_gradient"));
  CHECK(rep.context.h == 1.0 / 32);

  rep = verify_solution(d, solve(d, 0.5, Signature::Lorentzian, 1.0 / 32));
  CHECK(rep.all_pass());
  CHECK(rep.find("height_diameter"));
  CHECK(rep.find("height_strip"));
  CHECK_FALSE(rep.find("serrin_gradient"));
}
