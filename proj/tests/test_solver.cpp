#include "cmcgraph/catalog.hpp"
#include "cmcgraph/solver.hpp"

#include <doctest.h>

#include <Eigen/SparseLU>

#include <cmath>

using namespace cmc;

namespace {

Domain unit_disk() { return Domain::disk({0, 0}, 1.0); }

}  // namespace

TEST_CASE("config validation") {
  ContinuationConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.tolerance_for(0.5) == 1e-10);
  CHECK(c.tolerance_for(-3.0) == doctest::Approx(3e-10));
  c.t_step_min = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.spacelike_delta = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("newton_step") {
  const Grid g = build_grid(unit_disk(), 1.0 / 16);
  const McParams par{0.5, Signature::Euclidean};
  const Field z = zero_field(g);
  // At t = 0 the zero field is already exact.
  auto r = newton_step(g, par, 0.0, assemble(g, z, par, 0.0, true), z, {});
  CHECK(r.accepted);
  CHECK(r.step_norm == 0.0);
  CHECK(r.field.values.norm() == 0.0);

  // One step at small t: the correction solves a Poisson-like system whose
  // discrete maximum principle forces u < 0 for H > 0.
  const auto sys = assemble(g, z, par, 0.05, true);
  r = newton_step(g, par, 0.05, sys, z, {});
  CHECK(r.accepted);
  CHECK(r.field.values.maxCoeff() < 0.0);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(sys.jacobian);
  const Eigen::VectorXd direct = lu.solve(-sys.residual);
  CHECK(direct.maxCoeff() < 0.0);
  CHECK((r.field.values - r.damping * direct).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("cap on the unit disk converges with quadratic Newton tails") {
  const auto o = solve_dirichlet(unit_disk(), 0.5, Signature::Euclidean, 1.0 / 32);
  REQUIRE(o.converged());
  CHECK(o.t_reached == 1.0);
  CHECK(o.final_residual <= o.newton_tol);
  CHECK(std::abs(interpolate(*o.grid, o.field, {0, 0}) - (std::sqrt(3.0) - 2)) < 4e-3);
  CHECK(o.field.values.maxCoeff() <= 1e-8);

  // Residuals of the last Newton solve (at t = 1).
  std::vector<double> res;
  for (const auto& it : o.iterations)
    if (it.t == 1.0) res.push_back(it.residual_norm);
  REQUIRE(res.size() >= 2);
  for (std::size_t k = 1; k < res.size(); ++k) {
    if (res[k - 1] < 1e-3 && res[k] > 1e-13) CHECK(res[k] <= 100.0 * res[k - 1] * res[k - 1]);
  }

  // Continuation monotonicity: depth grows with t.
  REQUIRE(o.diagnostics.size() >= 2);
  CHECK(o.diagnostics.front().t == 0.0);
  for (const auto& d : o.diagnostics) CHECK(d.min_lambda == 1.0);
}

TEST_CASE("continuation fields are ordered in t") {
  const Domain d = unit_disk();
  ContinuationConfig c;
  const auto a = solve_dirichlet(d, 0.25, Signature::Euclidean, 1.0 / 32, c);
  const auto b = solve_dirichlet(d, 0.5, Signature::Euclidean, 1.0 / 32, c);
  REQUIRE(a.converged());
  REQUIRE(b.converged());
  CHECK((b.field.values - a.field.values).maxCoeff() <= 1e-8);
}

TEST_CASE("nonexistence on the unit disk for H = 1.2") {
  const auto o = solve_dirichlet(unit_disk(), 1.2, Signature::Euclidean, 1.0 / 32);
  CHECK_FALSE(o.converged());
  CHECK(o.t_reached < 1.0);
  CHECK_FALSE(o.reason.empty());
}

TEST_CASE("lorentzian cap and spacelike contract") {
  ContinuationConfig c;
  const auto o = solve_dirichlet(unit_disk(), 0.5, Signature::Lorentzian, 1.0 / 32, c);
  REQUIRE(o.converged());
  CHECK(o.min_accepted_margin >= c.spacelike_delta);
  for (const auto& d : o.diagnostics) {
    CHECK(d.spacelike_margin >= c.spacelike_delta);
    CHECK(d.min_lambda > 0.0);
  }
  CHECK(std::abs(o.field.values.cwiseAbs().maxCoeff() - (std::sqrt(5.0) - 2)) < 4e-3);
}

TEST_CASE("nonzero boundary data, minimal surface") {
  const auto phi = [](const Point& p) { return 0.1 * p.x(); };
  const auto o = solve_dirichlet(unit_disk(), 0.0, Signature::Euclidean, phi, 1.0 / 32);
  REQUIRE(o.converged());
  // The plane is the exact solution.
  for (int k = 0; k < o.grid->unknown_count(); ++k)
    CHECK(std::abs(o.field.values[k] - 0.1 * o.grid->unknown_position(k).x()) < 1e-10);
}

TEST_CASE("determinism") {
  const auto a = solve_dirichlet(unit_disk(), 0.4, Signature::Lorentzian, 1.0 / 16);
  const auto b = solve_dirichlet(unit_disk(), 0.4, Signature::Lorentzian, 1.0 / 16);
  REQUIRE(a.iterations.size() == b.iterations.size());
  for (std::size_t i = 0; i < a.iterations.size(); ++i) CHECK(a.iterations[i].residual_norm == b.iterations[i].residual_norm);
  CHECK(a.field.values == b.field.values);
}

TEST_CASE("solvability predicates") {
  auto r = solvability_predicates(unit_disk(), 0.5, Signature::Euclidean);
  CHECK(r.serrin_ok);
  CHECK(r.t5_ok);
  CHECK(r.necessary_ok);
  CHECK_FALSE(r.disk_obstruction);
  CHECK(r.inradius_estimate == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(r.predicts_existence(Signature::Euclidean));

  r = solvability_predicates(unit_disk(), 1.2, Signature::Euclidean);
  CHECK_FALSE(r.necessary_ok);
  CHECK(r.disk_obstruction);
  CHECK(r.predicts_nonexistence(Signature::Euclidean));
  CHECK_FALSE(r.predicts_nonexistence(Signature::Lorentzian));

  r = solvability_predicates(Domain::star(1, 0.3, 5), 3.0, Signature::Lorentzian);
  CHECK_FALSE(r.lorentz_convex_ok);
  CHECK(r.lorentz_smooth_ok);
  CHECK_FALSE(r.strip_ok);
  CHECK(r.predicts_existence(Signature::Lorentzian));

  for (double H : {0.1, 0.3, 0.5, 0.7, 1.1}) {
    const auto q = solvability_predicates(Domain::ellipse(2, 1), H, Signature::Euclidean);
    if (q.serrin_ok) CHECK(q.t5_ok);
  }
  // Rectangle: corners break every smooth-curvature hypothesis.
  r = solvability_predicates(Domain::rectangle({0, 0}, 2, 1), 0.2, Signature::Lorentzian);
  CHECK_FALSE(r.t5_ok);
  CHECK(r.lorentz_convex_ok);
  CHECK(r.strip_ok);
}
