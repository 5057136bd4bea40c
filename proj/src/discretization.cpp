#include "cmcgraph/discretization.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cmc {

namespace {

const std::array<Eigen::Vector2i, 4> kAxis = {Eigen::Vector2i(1, 0), Eigen::Vector2i(0, 1), Eigen::Vector2i(-1, 0),
                                              Eigen::Vector2i(0, -1)};
const std::array<Eigen::Vector2i, 4> kDiagonal = {Eigen::Vector2i(1, 1), Eigen::Vector2i(-1, 1),
                                                  Eigen::Vector2i(-1, -1), Eigen::Vector2i(1, -1)};

// Fraction along a -> b (a inside, b outside) where the domain is left.
double boundary_crossing(const Domain& domain, const Point& a, const Point& b) {
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (domain.contains(a + mid * (b - a)) ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  return 1.0 - t < 1e-9 ? 1.0 : t;
}

struct SamplePoint {
  Point offset;  // in units of h
  int ref;
};

double value(const Field& f, int ref) { return ref >= 0 ? f.values[ref] : f.boundary_values[-ref - 1]; }

template <class Terms>
double apply(const Terms& terms, const Field& f) {
  double s = 0.0;
  for (const auto& t : terms) s += t.weight * value(f, t.ref);
  return s;
}

}  // namespace

int Grid::count(NodeClass c) const {
  return static_cast<int>(std::ranges::count(node_class, c));
}

Grid build_grid(const Domain& domain, double h) {
  const double diam = diameter(domain);
  if (!(h > 0.0) || !(h < diam / 8.0)) {
    throw std::invalid_argument("build_grid: need 0 < h < diam/8 (h=" + std::to_string(h) +
                                ", diam=" + std::to_string(diam) + ")");
  }
  const Box box = domain.bounding_box();
  Grid g;
  g.h = h;
  g.origin = box.min() - Point(2 * h, 2 * h);
  g.nx = static_cast<int>(std::ceil((box.sizes().x() + 4 * h) / h - 1e-9)) + 1;
  g.ny = static_cast<int>(std::ceil((box.sizes().y() + 4 * h) / h - 1e-9)) + 1;
  const int n = g.nx * g.ny;

  std::vector<char> inside(n);
  for (int id = 0; id < n; ++id) inside[id] = domain.contains(g.node_position(id));

  auto neighbour = [&](int id, const Eigen::Vector2i& d) {
    const int i = id % g.nx + d.x(), j = id / g.nx + d.y();
    if (i < 0 || j < 0 || i >= g.nx || j >= g.ny) return -1;
    return g.node_id(i, j);
  };

  // Axis arm fractions for every inside node.
  std::vector<std::array<double, 4>> theta(n, {1.0, 1.0, 1.0, 1.0});
  std::vector<char> snapped(n, 0);
  for (int id = 0; id < n; ++id) {
    if (!inside[id]) continue;
    for (int d = 0; d < 4; ++d) {
      const int nb = neighbour(id, kAxis[d]);
      if (nb >= 0 && inside[nb]) continue;
      const Point a = g.node_position(id);
      theta[id][d] = boundary_crossing(domain, a, a + h * kAxis[d].cast<double>());
      if (theta[id][d] < kThetaMin) snapped[id] = 1;
    }
  }

  g.node_class.assign(n, NodeClass::Exterior);
  g.unknown_of_node.assign(n, -1);
  for (int id = 0; id < n; ++id) {
    if (inside[id] && !snapped[id]) {
      g.unknown_of_node[id] = static_cast<int>(g.unknowns.size());
      g.unknowns.push_back(NodeStencil{id, {}, {}, {}, {}, {}, {}, {}, true});
    }
  }
  if (g.unknowns.empty()) throw std::invalid_argument("build_grid: no interior node at this spacing");

  auto new_boundary = [&](const Point& p) {
    g.boundary_points.push_back(p);
    return static_cast<int>(g.boundary_points.size()) - 1;
  };
  auto is_unknown = [&](int id) { return id >= 0 && g.unknown_of_node[id] >= 0; };

  for (auto& st : g.unknowns) {
    const int id = st.node;
    const Point x0 = g.node_position(id);
    std::array<SamplePoint, 4> axis;
    bool regular = true;
    for (int d = 0; d < 4; ++d) {
      const Eigen::Vector2d dir = kAxis[d].cast<double>();
      const int nb = neighbour(id, kAxis[d]);
      Arm& arm = st.arms[d];
      if (is_unknown(nb)) {
        arm = {1.0, -1};
        axis[d] = {dir, g.unknown_of_node[nb]};
        continue;
      }
      regular = false;
      // Merged nodes are skipped: the arm runs on to the next unknown or to
      // the boundary crossing beyond them.
      int steps = 1, last = id, cur = nb;
      while (cur >= 0 && inside[cur] && snapped[cur]) {
        last = cur;
        cur = neighbour(cur, kAxis[d]);
        ++steps;
      }
      if (is_unknown(cur)) {
        arm = {static_cast<double>(steps), -1};
        axis[d] = {steps * dir, g.unknown_of_node[cur]};
        continue;
      }
      const double s = (steps - 1) + theta[last][d];
      arm = {s, new_boundary(x0 + s * h * dir)};
      axis[d] = {s * dir, -arm.boundary - 1};
    }
    g.node_class[id] = regular ? NodeClass::Interior : NodeClass::Irregular;

    const int self = g.unknown_of_node[id];
    // Shortley-Weller first and second derivatives along each axis.
    auto axis_terms = [&](int plus, int minus, std::vector<Term>& first, std::vector<Term>& second) {
      const double b = st.arms[plus].theta * h, a = st.arms[minus].theta * h;
      const double den = a * b * (a + b);
      first = {{axis[plus].ref, a * a / den}, {axis[minus].ref, -b * b / den}, {self, -(a * a - b * b) / den}};
      second = {{axis[plus].ref, 2 * a / den}, {axis[minus].ref, 2 * b / den}, {self, -2 * (a + b) / den}};
    };
    axis_terms(kEast, kWest, st.du1, st.d11);
    axis_terms(kNorth, kSouth, st.du2, st.d22);

    std::vector<SamplePoint> diag;
    bool full_diagonals = true;
    for (int d = 0; d < 4; ++d) {
      const Eigen::Vector2d dir = kDiagonal[d].cast<double>();
      const int nb = neighbour(id, kDiagonal[d]);
      if (is_unknown(nb)) {
        diag.push_back({dir, g.unknown_of_node[nb]});
        continue;
      }
      full_diagonals = false;
      if (nb >= 0 && inside[nb]) {
        // Merged node: sample the crossing beyond it, or drop the sample.
        const int far = neighbour(nb, kDiagonal[d]);
        if (far >= 0 && !inside[far]) {
          const Point a = g.node_position(nb);
          const double s = 1.0 + boundary_crossing(domain, a, a + h * dir);
          diag.push_back({s * dir, -new_boundary(x0 + s * h * dir) - 1});
        }
      } else {
        const Point far = x0 + h * dir;
        const double s = boundary_crossing(domain, x0, far);
        diag.push_back({s * dir, -new_boundary(x0 + s * (far - x0)) - 1});
      }
    }

    const double h2 = h * h;
    if (full_diagonals) {
      st.d12 = {{diag[0].ref, 0.25 / h2}, {diag[1].ref, -0.25 / h2}, {diag[2].ref, 0.25 / h2},
                {diag[3].ref, -0.25 / h2}};
    } else {
      // Least-squares quadratic through the centre, the four axis samples and
      // the four diagonal samples; keep the xy coefficient.
      std::vector<SamplePoint> pts = {{Point::Zero(), self}};
      pts.insert(pts.end(), axis.begin(), axis.end());
      pts.insert(pts.end(), diag.begin(), diag.end());
      Eigen::Matrix<double, Eigen::Dynamic, 6> A(pts.size(), 6);
      for (std::size_t r = 0; r < pts.size(); ++r) {
        const double x = pts[r].offset.x(), y = pts[r].offset.y();
        A.row(r) << 1.0, x, y, 0.5 * x * x, x * y, 0.5 * y * y;
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
      qr.setThreshold(1e-10);
      if (qr.rank() == 6) {
        const Eigen::MatrixXd pinv = qr.solve(Eigen::MatrixXd::Identity(pts.size(), pts.size()));
        for (std::size_t r = 0; r < pts.size(); ++r) st.d12.push_back({pts[r].ref, pinv(4, r) / h2});
      } else {
        st.mixed_fit_ok = false;
      }
    }

    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const int nb = neighbour(id, Eigen::Vector2i(di, dj));
        if (nb >= 0 && g.unknown_of_node[nb] >= 0) st.pattern.push_back(g.unknown_of_node[nb]);
      }
    for (const auto& a : axis)
      if (a.ref >= 0 && std::ranges::find(st.pattern, a.ref) == st.pattern.end()) st.pattern.push_back(a.ref);
  }
  return g;
}

Field sample_field(const Grid& grid, const std::function<double(const Point&)>& fn) {
  Field f;
  f.values.resize(grid.unknown_count());
  for (int k = 0; k < grid.unknown_count(); ++k) f.values[k] = fn(grid.unknown_position(k));
  set_boundary_values(grid, f, fn);
  return f;
}

Field zero_field(const Grid& grid, const BoundaryData& boundary_data) {
  Field f;
  f.values = Eigen::VectorXd::Zero(grid.unknown_count());
  set_boundary_values(grid, f, boundary_data);
  return f;
}

void set_boundary_values(const Grid& grid, Field& field, const BoundaryData& boundary_data) {
  field.boundary_values.resize(static_cast<Eigen::Index>(grid.boundary_points.size()));
  for (std::size_t b = 0; b < grid.boundary_points.size(); ++b)
    field.boundary_values[static_cast<Eigen::Index>(b)] = boundary_data(grid.boundary_points[b]);
}

JetD jet_at(const Grid& grid, const Field& field, int unknown) {
  const NodeStencil& st = grid.unknowns.at(unknown);
  JetD jet;
  jet.u = field.values[unknown];
  jet.du << apply(st.du1, field), apply(st.du2, field);
  jet.d11 = apply(st.d11, field);
  jet.d12 = apply(st.d12, field);
  jet.d22 = apply(st.d22, field);
  return jet;
}

std::vector<Eigen::Vector2d> gradients(const Grid& grid, const Field& field) {
  std::vector<Eigen::Vector2d> out(grid.unknown_count());
  for (int k = 0; k < grid.unknown_count(); ++k) {
    const NodeStencil& st = grid.unknowns[k];
    out[k] << apply(st.du1, field), apply(st.du2, field);
  }
  return out;
}

DiscreteSystem assemble(const Grid& grid, const Field& field, const McParams& params, double t,
                        const BoundaryData& boundary_data) {
  Field f = field;
  set_boundary_values(grid, f, boundary_data);
  return assemble(grid, f, params, t, true);
}

DiscreteSystem assemble(const Grid& grid, const Field& field, const McParams& params, double t, bool with_jacobian) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("assemble: t must lie in [0, 1]");
  const int n = grid.unknown_count();
  const McParams pt{t * params.H, params.signature};
  DiscreteSystem sys;
  sys.residual.resize(n);
  std::vector<Eigen::Triplet<double>> trips;
  if (with_jacobian) trips.reserve(static_cast<std::size_t>(n) * 12);
  for (int k = 0; k < n; ++k) {
    const JetD jet = jet_at(grid, field, k);
    try {
      sys.residual[k] = q_residual(jet, pt);
    } catch (const NotSpacelike& e) {
      throw NotSpacelike("not spacelike at node " + std::to_string(k) + ": " + e.what());
    }
    if (!with_jacobian) continue;
    const Linearization lin = linearization_coeffs(jet, pt);
    const NodeStencil& st = grid.unknowns[k];
    for (int nb : st.pattern) trips.emplace_back(k, nb, 0.0);
    auto add = [&](const std::vector<Term>& terms, double coef) {
      for (const auto& term : terms)
        if (term.ref >= 0) trips.emplace_back(k, term.ref, coef * term.weight);
    };
    add(st.du1, lin.b(0));
    add(st.du2, lin.b(1));
    add(st.d11, lin.a(0, 0));
    add(st.d12, 2.0 * lin.a(0, 1));
    add(st.d22, lin.a(1, 1));
  }
  if (with_jacobian) {
    sys.jacobian.resize(n, n);
    sys.jacobian.setFromTriplets(trips.begin(), trips.end());
    sys.jacobian.makeCompressed();
  }
  return sys;
}

double interpolate(const Grid& grid, const Field& field, const Point& p) {
  const Point local = (p - grid.origin) / grid.h;
  const int i = static_cast<int>(std::floor(local.x()));
  const int j = static_cast<int>(std::floor(local.y()));
  if (i < 0 || j < 0 || i + 1 >= grid.nx || j + 1 >= grid.ny) {
    throw std::out_of_range("interpolate: point outside the grid");
  }
  const std::array<int, 4> ids = {grid.node_id(i, j), grid.node_id(i + 1, j), grid.node_id(i, j + 1),
                                  grid.node_id(i + 1, j + 1)};
  std::array<double, 4> v{};
  for (int c = 0; c < 4; ++c) {
    const int k = grid.unknown_of_node[ids[c]];
    if (k < 0) throw std::out_of_range("interpolate: point too close to the boundary");
    v[c] = field.values[k];
  }
  const double fx = local.x() - i, fy = local.y() - j;
  return (1 - fx) * (1 - fy) * v[0] + fx * (1 - fy) * v[1] + (1 - fx) * fy * v[2] + fx * fy * v[3];
}

}  // namespace cmc
