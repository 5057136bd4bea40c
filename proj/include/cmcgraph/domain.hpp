// Bounded planar domains and the boundary geometry that the solvability
// hypotheses and height estimates are stated in.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cmc {

using Point = Eigen::Vector2d;
using Box = Eigen::AlignedBox2d;

class GeometryError : public std::runtime_error {
 public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

struct Disk {
  Point center;
  double radius;
};

struct Rectangle {
  Point corner;  // lower-left
  double width;
  double height;
};

struct Polygon {
  std::vector<Point> vertices;  // counterclockwise, no repeated closing vertex
};

/// Level-set sampler: negative inside, positive outside.
using LevelSet = std::function<double(const Point&)>;

struct Implicit {
  LevelSet level;
  Box box;
  std::string label;
  // Dense closed loop traced at construction (counterclockwise) together with
  // the ray angles and radii it was traced with from `seed`.
  Point seed;
  std::vector<Point> loop;
  std::vector<double> ray_radius;
};

using Shape = std::variant<Disk, Rectangle, Polygon, Implicit>;

class Domain {
 public:
  static Domain disk(const Point& center, double radius);
  static Domain rectangle(const Point& corner, double width, double height);
  /// Vertices in either orientation; stored counterclockwise. Rejects
  /// self-intersecting or degenerate input.
  static Domain polygon(std::vector<Point> vertices);
  /// Traces the zero level at construction; throws GeometryError when it is
  /// not a single closed loop visible from the box center (or the most
  /// negative sample).
  static Domain implicit(LevelSet level, const Box& box, std::string label = "implicit");

  /// Ellipse with semi-axes a, b centred at the origin.
  static Domain ellipse(double a, double b);
  /// Star r(theta) = r0 + amplitude * cos(lobes * theta) centred at the origin.
  static Domain star(double r0, double amplitude, int lobes);

  bool contains(const Point& p) const;
  Box bounding_box() const;
  const Shape& shape() const { return *shape_; }
  bool is_polygonal() const;
  std::string describe() const;

 private:
  explicit Domain(Shape s) : shape_(std::make_shared<const Shape>(std::move(s))) {}
  std::shared_ptr<const Shape> shape_;
};

struct BoundaryPoint {
  Point position;
  Point inward_normal;
  double curvature = 0.0;  // w.r.t. the inner normal; positive where locally convex
  bool nonsmooth = false;  // polygon vertex: curvature undefined
};

struct CurvatureRange {
  double kappa_min;
  double kappa_max;
  bool has_corners;  // vertices were excluded from the range
  int samples;
};

struct DirectionalWidth {
  double angle;  // direction of the strip normal, in [0, pi)
  double width;
};

struct StripStats {
  double min_width;                     // Theta
  double max_min_width_over_directions;
  std::vector<DirectionalWidth> width_by_direction;
};

struct ExteriorCircle {
  double radius;
  bool ok;  // false when no positive radius works at some sample
};

inline constexpr int kDefaultBoundarySamples = 1024;

bool contains(const Domain& domain, const Point& p);
std::vector<BoundaryPoint> boundary_sample(const Domain& domain, int n);
CurvatureRange curvature_range(const Domain& domain, int n = kDefaultBoundarySamples);
double diameter(const Domain& domain, int n = kDefaultBoundarySamples);
StripStats strip_stats(const Domain& domain, int n_directions = 180);
std::pair<double, double> area_perimeter(const Domain& domain);
ExteriorCircle exterior_circle_radius(const Domain& domain, int n = kDefaultBoundarySamples);

/// Radius of the largest inscribed disk, searched over candidate centres
/// down to a spacing of diam/512.
double inradius(const Domain& domain);

/// Distance from p to the boundary (polyline through `samples` points, or
/// exact for disks and polygons).
double boundary_distance(const Domain& domain, const Point& p, int samples = 2048);

/// True when every polygon turn is a left turn. Smooth shapes report whether
/// the sampled curvature is nonnegative.
bool is_convex(const Domain& domain);

}  // namespace cmc
