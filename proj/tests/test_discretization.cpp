#include "cmcgraph/catalog.hpp"
#include "cmcgraph/discretization.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace cmc;

namespace {

Domain unit_disk() { return Domain::disk({0, 0}, 1.0); }

// Max |Q| of a sampled exact solution over nodes of one class. Interior
// nodes count only with a full nine-point stencil.
double residual_max(const Domain& d, double h, const ExactSurface& s, NodeClass cls) {
  const Grid g = build_grid(d, h);
  const Field f = sample_field(g, [&](const Point& p) { return s.value(p); });
  const auto sys = assemble(g, f, {s.signed_H(), s.signature()}, 1.0, false);
  double m = 0.0;
  for (int k = 0; k < g.unknown_count(); ++k)
    if (g.node_class[g.unknowns[k].node] == cls && (cls != NodeClass::Interior || g.unknowns[k].d12.size() == 4))
      m = std::max(m, std::abs(sys.residual[k]));
  return m;
}

}  // namespace

TEST_CASE("build_grid basics") {
  const Grid g = build_grid(unit_disk(), 0.2);  // h must stay below diam/8
  CHECK(g.count(NodeClass::Interior) >= 4);
  CHECK_THROWS_AS(build_grid(unit_disk(), 0.25), std::invalid_argument);

  // Dihedral symmetry of the classification about the centre.
  const Grid s = build_grid(unit_disk(), 1.0 / 16);
  std::set<std::pair<long, long>> pos;
  for (int k = 0; k < s.unknown_count(); ++k) {
    const Point p = s.unknown_position(k) * 16.0;
    pos.insert({std::lround(p.x()), std::lround(p.y())});
  }
  for (const auto& [x, y] : pos) {
    CHECK(pos.contains({-x, y}));
    CHECK(pos.contains({y, x}));
  }

  const Grid f = build_grid(unit_disk(), 1.0 / 32);
  const double expected = std::numbers::pi * 32 * 32;
  CHECK(std::abs(f.unknown_count() - expected) < 0.02 * expected);
}

TEST_CASE("grid invariants") {
  for (const Domain& d : {unit_disk(), Domain::star(1, 0.3, 5), Domain::rectangle({0, 0}, 2, 1)}) {
    const Grid g = build_grid(d, 1.0 / 32);
    for (const auto& st : g.unknowns) {
      // Arms reaching across a merged node run up to two spacings.
      bool direct = true;
      for (const Arm& a : st.arms) {
        CHECK(a.theta > kThetaMin);
        CHECK(a.theta <= 2.0);
        direct = direct && a.boundary < 0 && a.theta == 1.0;
      }
      const bool irregular = g.node_class[st.node] == NodeClass::Irregular;
      CHECK(irregular == !direct);
      CHECK(st.pattern.size() <= (irregular ? 12u : 9u));
    }
  }
  // Grid-aligned rectangle: boundary crossings fall exactly on lattice lines.
  const Grid r = build_grid(Domain::rectangle({0, 0}, 2, 1), 1.0 / 8);
  for (const auto& st : r.unknowns)
    for (const Arm& a : st.arms) CHECK(a.theta == 1.0);
}

TEST_CASE("stencils reproduce quadratics at regular nodes") {
  const Grid g = build_grid(unit_disk(), 1.0 / 16);
  const Field a = sample_field(g, [](const Point& p) { return p.x() * p.x(); });
  const Field b = sample_field(g, [](const Point& p) { return p.x() * p.y(); });
  const Field c = sample_field(g, [](const Point& p) { return 1 + 2 * p.x() - p.y() + 0.3 * p.x() * p.x() - 0.7 * p.x() * p.y() + 0.2 * p.y() * p.y(); });
  for (int k = 0; k < g.unknown_count(); ++k) {
    const Point p = g.unknown_position(k);
    const bool regular = g.node_class[g.unknowns[k].node] == NodeClass::Interior;
    const JetD ja = jet_at(g, a, k), jb = jet_at(g, b, k), jc = jet_at(g, c, k);
    // Shortley-Weller is exact on quadratics at every node; the least-squares
    // mixed derivative is exact too.
    CHECK(std::abs(ja.d11 - 2.0) < 1e-8);
    CHECK(std::abs(ja.d22) < 1e-8);
    CHECK(std::abs(jb.d12 - 1.0) < 1e-8);
    CHECK(std::abs(jc.du(0) - (2 + 0.6 * p.x() - 0.7 * p.y())) < 1e-9);
    CHECK(std::abs(jc.du(1) - (-1 - 0.7 * p.x() + 0.4 * p.y())) < 1e-9);
    if (regular) {
      CHECK(std::abs(ja.d11 - 2.0) < 1e-10);
      CHECK(std::abs(jb.d12 - 1.0) < 1e-10);
      CHECK(std::abs(jc.d12 + 0.7) < 1e-10);
    }
  }
}

TEST_CASE("residual of exact caps converges at second order on regular nodes") {
  for (const ExactSurface& s : {euclidean_cap(0.5, 1.0), lorentz_cap(0.5, 1.0)}) {
    double prev = residual_max(unit_disk(), 1.0 / 16, s, NodeClass::Interior);
    for (double n : {32.0, 64.0}) {
      const double cur = residual_max(unit_disk(), 1.0 / n, s, NodeClass::Interior);
      CHECK(std::log2(prev / cur) >= 1.5);
      CHECK(prev / cur >= 3.0);
      prev = cur;
    }
    // Irregular nodes: first order or better.
    const double i32 = residual_max(unit_disk(), 1.0 / 32, s, NodeClass::Irregular);
    const double i64 = residual_max(unit_disk(), 1.0 / 64, s, NodeClass::Irregular);
    CHECK(i32 / i64 >= 1.8);
  }
}

TEST_CASE("assemble examples") {
  const Grid g = build_grid(unit_disk(), 1.0 / 16);
  const Field z = zero_field(g);
  CHECK(assemble(g, z, {0.5, Signature::Euclidean}, 0.0, zero_boundary).residual.lpNorm<Eigen::Infinity>() == 0.0);
  const auto sys = assemble(g, z, {0.5, Signature::Euclidean}, 1.0, zero_boundary);
  for (int k = 0; k < g.unknown_count(); ++k) CHECK(sys.residual[k] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK_THROWS_AS(assemble(g, z, {0.5, Signature::Euclidean}, 1.5, true), std::invalid_argument);

  Field steep = sample_field(g, [](const Point& p) { return 1.2 * p.x(); });
  CHECK_THROWS_AS(assemble(g, steep, {0.5, Signature::Lorentzian}, 1.0, true), NotSpacelike);
}

TEST_CASE("jacobian matches finite differences and has a symmetric pattern") {
  const Grid g = build_grid(unit_disk(), 1.0 / 16);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  for (Signature sig : {Signature::Euclidean, Signature::Lorentzian}) {
    const double a = U(rng), b = U(rng), c = U(rng);
    Field f = sample_field(g, [&](const Point& p) {
      return 0.2 * (a * p.x() + b * p.y() + c * p.x() * p.y()) + 0.1 * std::sin(2 * p.x() + p.y());
    });
    const McParams par{0.7, sig};
    const auto sys = assemble(g, f, par, 1.0, true);
    Eigen::VectorXd dir(g.unknown_count());
    for (int k = 0; k < dir.size(); ++k) dir[k] = U(rng);
    const double s = 1e-7;
    Field moved = f;
    moved.values += s * dir;
    const Eigen::VectorXd fd = (assemble(g, moved, par, 1.0, false).residual - sys.residual) / s;
    const Eigen::VectorXd jd = sys.jacobian * dir;
    CHECK((fd - jd).norm() <= 1e-6 * jd.norm());

    const Eigen::SparseMatrix<double> J = sys.jacobian;
    const Eigen::SparseMatrix<double> Jt = J.transpose();
    Eigen::SparseMatrix<double> pat = J, patt = Jt;
    for (int k = 0; k < pat.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(pat, k); it; ++it) it.valueRef() = 1.0;
    for (int k = 0; k < patt.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(patt, k); it; ++it) it.valueRef() = 1.0;
    CHECK((Eigen::SparseMatrix<double>(pat - patt)).norm() == 0.0);
  }
}

TEST_CASE("interpolate") {
  const Grid g = build_grid(unit_disk(), 1.0 / 64);
  const Field c = sample_field(g, [](const Point&) { return 3.5; });
  CHECK(interpolate(g, c, {0.123, -0.456}) == doctest::Approx(3.5).epsilon(1e-15));
  const Field x = sample_field(g, [](const Point& p) { return p.x(); });
  CHECK(std::abs(interpolate(g, x, {0.123, -0.456}) - 0.123) < 1e-14);
  const ExactSurface cap = euclidean_cap(0.5, 1.0);
  const Field cf = sample_field(g, [&](const Point& p) { return cap.value(p); });
  CHECK(std::abs(interpolate(g, cf, {0, 0}) - (std::sqrt(3.0) - 2)) < 5e-4);
  CHECK_THROWS_AS(interpolate(g, c, {0.999, 0.0}), std::out_of_range);
  CHECK_THROWS_AS(interpolate(g, c, {5.0, 0.0}), std::out_of_range);
}
