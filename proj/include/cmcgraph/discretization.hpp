// Embedded-boundary finite differences for the mean-curvature operator on a
// uniform Cartesian grid. Nodes next to the boundary use Shortley-Weller
// arms; their mixed derivative comes from a local least-squares quadratic.
#pragma once

#include "cmcgraph/domain.hpp"
#include "cmcgraph/mc_operator.hpp"

#include <Eigen/Sparse>

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace cmc {

enum class NodeClass : std::uint8_t { Interior, Irregular, Exterior };

/// Arms shorter than this fraction of h are merged into the boundary.
inline constexpr double kThetaMin = 0.05;

using BoundaryData = std::function<double(const Point&)>;

inline double zero_boundary(const Point&) { return 0.0; }

/// A reference into the nodal data: >= 0 is an unknown index, < 0 encodes
/// boundary point -(ref + 1).
struct Term {
  int ref;
  double weight;
};

struct Arm {
  double theta = 1.0;  // fraction of h to the neighbour or to the boundary
  int boundary = -1;   // boundary point index when the arm ends on the boundary
};

enum Direction { kEast = 0, kNorth = 1, kWest = 2, kSouth = 3 };

struct NodeStencil {
  int node = -1;  // flat grid index
  std::array<Arm, 4> arms;
  std::vector<Term> du1, du2, d11, d12, d22;
  std::vector<int> pattern;  // unknowns in the 3x3 block, including itself
  bool mixed_fit_ok = true;  // false: rank-deficient fit, D12 weight dropped
};

struct Grid {
  Point origin = Point::Zero();
  double h = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<NodeClass> node_class;     // nx * ny, row-major in y
  std::vector<int> unknown_of_node;      // -1 for exterior nodes
  std::vector<NodeStencil> unknowns;     // indexed by unknown number
  std::vector<Point> boundary_points;    // Dirichlet sample locations

  int node_id(int i, int j) const { return j * nx + i; }
  Point node_position(int id) const { return origin + h * Point(id % nx, id / nx); }
  Point unknown_position(int k) const { return node_position(unknowns[k].node); }
  int unknown_count() const { return static_cast<int>(unknowns.size()); }
  int count(NodeClass c) const;
};

/// Grid over the bounding box inflated by 2h; fails when h >= diam/8 or no
/// interior node exists.
Grid build_grid(const Domain& domain, double h);

/// Nodal values on the unknowns plus Dirichlet values at the boundary points.
struct Field {
  Eigen::VectorXd values;
  Eigen::VectorXd boundary_values;
};

Field sample_field(const Grid& grid, const std::function<double(const Point&)>& fn);
Field zero_field(const Grid& grid, const BoundaryData& boundary_data = zero_boundary);
void set_boundary_values(const Grid& grid, Field& field, const BoundaryData& boundary_data);

JetD jet_at(const Grid& grid, const Field& field, int unknown);
std::vector<Eigen::Vector2d> gradients(const Grid& grid, const Field& field);

struct DiscreteSystem {
  Eigen::VectorXd residual;
  Eigen::SparseMatrix<double> jacobian;  // empty when not requested
};

/// Residual of Q_t (mean curvature t*H) at every unknown and its exact
/// Jacobian. Throws NotSpacelike naming the offending unknown.
DiscreteSystem assemble(const Grid& grid, const Field& field, const McParams& params, double t,
                        const BoundaryData& boundary_data);
/// Same, using the boundary values already stored in the field.
DiscreteSystem assemble(const Grid& grid, const Field& field, const McParams& params, double t,
                        bool with_jacobian = true);

/// Bilinear interpolation; requires the containing cell to consist of unknowns.
double interpolate(const Grid& grid, const Field& field, const Point& p);

}  // namespace cmc
