#include "cmcgraph/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cmc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kLoopRays = 4096;
constexpr int kRaySamples = 512;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(const std::vector<Point>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

std::vector<Point> rectangle_vertices(const Rectangle& r) {
  const Point c = r.corner;
  return {c, c + Point(r.width, 0.0), c + Point(r.width, r.height), c + Point(0.0, r.height)};
}

const std::vector<Point>* polygon_vertices_ptr(const Shape& s, std::vector<Point>& storage) {
  if (auto* p = std::get_if<Polygon>(&s)) return &p->vertices;
  if (auto* r = std::get_if<Rectangle>(&s)) {
    storage = rectangle_vertices(*r);
    return &storage;
  }
  return nullptr;
}

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

int orientation(const Point& a, const Point& b, const Point& c) {
  const double v = cross(b - a, c - a);
  const double scale = (b - a).norm() * (c - a).norm();
  if (std::abs(v) <= 1e-14 * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x(), b.x()) - 1e-14 <= p.x() && p.x() <= std::max(a.x(), b.x()) + 1e-14 &&
         std::min(a.y(), b.y()) - 1e-14 <= p.y() && p.y() <= std::max(a.y(), b.y()) + 1e-14;
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const int o1 = orientation(p1, p2, q1), o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1), o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool polygon_contains(const std::vector<Point>& v, const Point& p) {
  double scale = 0.0;
  for (const auto& q : v) scale = std::max(scale, q.cwiseAbs().maxCoeff());
  const double tol = 1e-12 * std::max(1.0, scale);
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if (segment_distance(p, v[j], v[i]) <= tol) return false;
    const Point& a = v[i];
    const Point& b = v[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double box_diagonal(const Box& b) { return (b.max() - b.min()).norm(); }

// Central-difference derivatives of the level function.
struct LevelDerivs {
  Point grad;
  double xx, xy, yy;
};

LevelDerivs level_derivs(const Implicit& im, const Point& p) {
  const double h = 1e-5 * box_diagonal(im.box);
  const Point ex(h, 0.0), ey(0.0, h);
  const double f0 = im.level(p);
  const double fxp = im.level(p + ex), fxm = im.level(p - ex);
  const double fyp = im.level(p + ey), fym = im.level(p - ey);
  LevelDerivs d;
  d.grad = Point((fxp - fxm) / (2 * h), (fyp - fym) / (2 * h));
  d.xx = (fxp - 2 * f0 + fxm) / (h * h);
  d.yy = (fyp - 2 * f0 + fym) / (h * h);
  d.xy = (im.level(p + ex + ey) - im.level(p + ex - ey) - im.level(p - ex + ey) + im.level(p - ex - ey)) /
         (4 * h * h);
  return d;
}

BoundaryPoint implicit_boundary_point(const Implicit& im, Point p) {
  for (int it = 0; it < 4; ++it) {
    const Point g = level_derivs(im, p).grad;
    const double g2 = g.squaredNorm();
    if (g2 == 0.0) break;
    p -= im.level(p) * g / g2;
  }
  const LevelDerivs d = level_derivs(im, p);
  const double gx = d.grad.x(), gy = d.grad.y();
  const double gn = d.grad.norm();
  BoundaryPoint bp;
  bp.position = p;
  bp.inward_normal = -d.grad / gn;
  bp.curvature = (d.xx * gy * gy - 2 * gx * gy * d.xy + d.yy * gx * gx) / (gn * gn * gn);
  return bp;
}

double ray_box_exit(const Box& box, const Point& s, const Point& d) {
  double t = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i) {
    if (d(i) > 0) t = std::min(t, (box.max()(i) - s(i)) / d(i));
    if (d(i) < 0) t = std::min(t, (box.min()(i) - s(i)) / d(i));
  }
  return t;
}

void trace_implicit(Implicit& im) {
  const Box& box = im.box;
  if (box.isEmpty()) throw GeometryError("implicit domain: empty bounding box");
  Point seed = box.center();
  if (!(im.level(seed) < 0.0)) {
    double best = std::numeric_limits<double>::infinity();
    const int m = 128;
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= m; ++j) {
        const Point q = box.min() + Point(box.sizes().x() * i / m, box.sizes().y() * j / m);
        const double v = im.level(q);
        if (v < best) {
          best = v;
          seed = q;
        }
      }
    }
    if (!(best < 0.0)) throw GeometryError("implicit domain: level function has no negative sample in the box");
  }
  im.seed = seed;
  im.loop.resize(kLoopRays);
  im.ray_radius.resize(kLoopRays);
  for (int k = 0; k < kLoopRays; ++k) {
    const double phi = 2 * kPi * k / kLoopRays;
    const Point d(std::cos(phi), std::sin(phi));
    const double tmax = ray_box_exit(box, seed, d);
    if (!(im.level(seed + tmax * d) >= 0.0)) {
      throw GeometryError("implicit domain: region is not contained in its bounding box");
    }
    int crossings = 0;
    double lo = 0.0, hi = tmax;
    bool prev_inside = true;
    for (int j = 1; j <= kRaySamples; ++j) {
      const double t = tmax * j / kRaySamples;
      const bool inside = im.level(seed + t * d) < 0.0;
      if (inside != prev_inside) {
        ++crossings;
        if (crossings == 1) {
          lo = tmax * (j - 1) / kRaySamples;
          hi = t;
        }
      }
      prev_inside = inside;
    }
    if (crossings != 1) {
      throw GeometryError("implicit domain: zero level is not a single closed loop (ray at angle " +
                          std::to_string(phi) + " crosses it " + std::to_string(crossings) + " times)");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (im.level(seed + mid * d) < 0.0 ? lo : hi) = mid;
    }
    im.ray_radius[k] = 0.5 * (lo + hi);
    im.loop[k] = seed + im.ray_radius[k] * d;
  }
  // Every negative sample in the box must lie inside the traced loop.
  const int m = 96;
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j <= m; ++j) {
      const Point q = box.min() + Point(box.sizes().x() * i / m, box.sizes().y() * j / m);
      if (!(im.level(q) < 0.0)) continue;
      const Point r = q - seed;
      double phi = std::atan2(r.y(), r.x());
      if (phi < 0) phi += 2 * kPi;
      const double x = phi / (2 * kPi) * kLoopRays;
      const int k0 = static_cast<int>(std::floor(x)) % kLoopRays;
      const int k1 = (k0 + 1) % kLoopRays;
      const double f = x - std::floor(x);
      const double rho = (1 - f) * im.ray_radius[k0] + f * im.ray_radius[k1];
      if (r.norm() > rho * (1 + 1e-2) + 1e-9 * box_diagonal(box)) {
        throw GeometryError("implicit domain: zero level has more than one component inside the box");
      }
    }
  }
}

std::vector<double> cumulative_length(const std::vector<Point>& loop) {
  std::vector<double> s(loop.size() + 1, 0.0);
  for (std::size_t i = 0; i < loop.size(); ++i) s[i + 1] = s[i] + (loop[(i + 1) % loop.size()] - loop[i]).norm();
  return s;
}

// Support points used for width/diameter computations.
std::vector<Point> support_points(const Domain& domain) {
  std::vector<Point> storage;
  if (const auto* v = polygon_vertices_ptr(domain.shape(), storage)) return *v;
  if (const auto* im = std::get_if<Implicit>(&domain.shape())) return im->loop;
  std::vector<Point> pts;
  for (const auto& bp : boundary_sample(domain, 4096)) pts.push_back(bp.position);
  return pts;
}

double width_along(const std::vector<Point>& pts, double angle) {
  const Point d(std::cos(angle), std::sin(angle));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : pts) {
    const double v = p.dot(d);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

// Golden-section search for an extremum of f on [a, b].
template <class F>
double golden(F f, double a, double b, bool maximize) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto val = [&](double x) { return maximize ? -f(x) : f(x); };
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = val(c), fd = val(d);
  while (b - a > 1e-11) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = val(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = val(d);
    }
  }
  return 0.5 * (a + b);
}

double wrap_angle_pi(double a) {
  a = std::fmod(a, kPi);
  if (a < 0) a += kPi;
  return a;
}

}  // namespace

// ---------------------------------------------------------------- Domain --

Domain Domain::disk(const Point& center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw GeometryError("disk radius must be positive");
  return Domain(Disk{center, radius});
}

Domain Domain::rectangle(const Point& corner, double width, double height) {
  if (!(width > 0.0) || !(height > 0.0)) throw GeometryError("rectangle sides must be positive");
  return Domain(Rectangle{corner, width, height});
}

Domain Domain::polygon(std::vector<Point> v) {
  if (v.size() >= 2 && (v.front() - v.back()).norm() == 0.0) v.pop_back();
  if (v.size() < 3) throw GeometryError("polygon needs at least three vertices");
  const double a = signed_area(v);
  if (!(std::abs(a) > 0.0)) throw GeometryError("polygon has zero area");
  if (a < 0) std::reverse(v.begin(), v.end());
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) {
        throw GeometryError("polygon is self-intersecting (edges " + std::to_string(i) + " and " +
                            std::to_string(j) + ")");
      }
    }
  }
  return Domain(Polygon{std::move(v)});
}

Domain Domain::implicit(LevelSet level, const Box& box, std::string label) {
  Implicit im{std::move(level), box, std::move(label), Point::Zero(), {}, {}};
  trace_implicit(im);
  return Domain(std::move(im));
}

Domain Domain::ellipse(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw GeometryError("ellipse semi-axes must be positive");
  const Box box(Point(-1.1 * a, -1.1 * b), Point(1.1 * a, 1.1 * b));
  std::ostringstream label;
  label << "ellipse(" << a << "," << b << ")";
  return implicit([a, b](const Point& p) { return (p.x() / a) * (p.x() / a) + (p.y() / b) * (p.y() / b) - 1.0; },
                  box, label.str());
}

Domain Domain::star(double r0, double amplitude, int lobes) {
  if (!(r0 > std::abs(amplitude))) throw GeometryError("star domain needs r0 > |amplitude|");
  const double R = 1.1 * (r0 + std::abs(amplitude));
  std::ostringstream label;
  label << "star(" << r0 << "," << amplitude << "," << lobes << ")";
  return implicit(
      [r0, amplitude, lobes](const Point& p) {
        const double theta = std::atan2(p.y(), p.x());
        return p.norm() - (r0 + amplitude * std::cos(lobes * theta));
      },
      Box(Point(-R, -R), Point(R, R)), label.str());
}

bool Domain::contains(const Point& p) const {
  return std::visit(overloaded{
                        [&](const Disk& d) { return (p - d.center).norm() < d.radius; },
                        [&](const Rectangle& r) {
                          return p.x() > r.corner.x() && p.x() < r.corner.x() + r.width && p.y() > r.corner.y() &&
                                 p.y() < r.corner.y() + r.height;
                        },
                        [&](const Polygon& poly) { return polygon_contains(poly.vertices, p); },
                        [&](const Implicit& im) { return im.level(p) < 0.0; },
                    },
                    *shape_);
}

Box Domain::bounding_box() const {
  return std::visit(overloaded{
                        [](const Disk& d) {
                          return Box(d.center.array() - d.radius, d.center.array() + d.radius);
                        },
                        [](const Rectangle& r) { return Box(r.corner, r.corner + Point(r.width, r.height)); },
                        [](const Polygon& poly) {
                          Box b;
                          for (const auto& v : poly.vertices) b.extend(v);
                          return b;
                        },
                        [](const Implicit& im) {
                          Box b;
                          for (const auto& v : im.loop) b.extend(v);
                          return b;
                        },
                    },
                    *shape_);
}

bool Domain::is_polygonal() const {
  return std::holds_alternative<Polygon>(*shape_) || std::holds_alternative<Rectangle>(*shape_);
}

std::string Domain::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Disk& d) {
                   os << "disk(center=(" << d.center.x() << "," << d.center.y() << "),radius=" << d.radius << ")";
                 },
                 [&](const Rectangle& r) {
                   os << "rectangle(corner=(" << r.corner.x() << "," << r.corner.y() << "),width=" << r.width
                      << ",height=" << r.height << ")";
                 },
                 [&](const Polygon& p) { os << "polygon(" << p.vertices.size() << " vertices)"; },
                 [&](const Implicit& im) { os << im.label; },
             },
             *shape_);
  return os.str();
}

// ------------------------------------------------------------ operations --

bool contains(const Domain& domain, const Point& p) { return domain.contains(p); }

std::vector<BoundaryPoint> boundary_sample(const Domain& domain, int n) {
  if (n < 4) throw std::invalid_argument("boundary_sample needs n >= 4");
  std::vector<BoundaryPoint> out;
  out.reserve(n);
  const Shape& s = domain.shape();
  if (const auto* d = std::get_if<Disk>(&s)) {
    for (int k = 0; k < n; ++k) {
      const double a = 2 * kPi * k / n;
      const Point dir(std::cos(a), std::sin(a));
      out.push_back({d->center + d->radius * dir, -dir, 1.0 / d->radius, false});
    }
    return out;
  }
  std::vector<Point> storage;
  if (const auto* v = polygon_vertices_ptr(s, storage)) {
    const auto cum = cumulative_length(*v);
    const double P = cum.back();
    const std::size_t m = v->size();
    std::size_t e = 0;
    for (int k = 0; k < n; ++k) {
      const double sk = P * k / n;
      while (e + 1 < m && cum[e + 1] <= sk) ++e;
      const Point a = (*v)[e], b = (*v)[(e + 1) % m];
      const Point t = (b - a).normalized();
      const Point normal(-t.y(), t.x());
      const double off = sk - cum[e];
      BoundaryPoint bp{a + off * t, normal, 0.0, false};
      if (std::abs(off) <= 1e-12 * P) {
        const Point prev = (a - (*v)[(e + m - 1) % m]).normalized();
        bp.inward_normal = (normal + Point(-prev.y(), prev.x())).normalized();
        bp.nonsmooth = true;
      }
      out.push_back(bp);
    }
    return out;
  }
  const auto& im = std::get<Implicit>(s);
  const auto cum = cumulative_length(im.loop);
  const double P = cum.back();
  const std::size_t m = im.loop.size();
  std::size_t e = 0;
  for (int k = 0; k < n; ++k) {
    const double sk = P * k / n;
    while (e + 1 < m && cum[e + 1] <= sk) ++e;
    const double f = (sk - cum[e]) / (cum[e + 1] - cum[e]);
    const Point p = (1 - f) * im.loop[e] + f * im.loop[(e + 1) % m];
    out.push_back(implicit_boundary_point(im, p));
  }
  return out;
}

CurvatureRange curvature_range(const Domain& domain, int n) {
  if (n < 64) throw std::invalid_argument("curvature_range needs n >= 64");
  if (const auto* d = std::get_if<Disk>(&domain.shape())) return {1.0 / d->radius, 1.0 / d->radius, false, n};
  CurvatureRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                   domain.is_polygonal(), n};
  for (const auto& bp : boundary_sample(domain, n)) {
    if (bp.nonsmooth) {
      r.has_corners = true;
      continue;
    }
    r.kappa_min = std::min(r.kappa_min, bp.curvature);
    r.kappa_max = std::max(r.kappa_max, bp.curvature);
  }
  return r;
}

double diameter(const Domain& domain, int n) {
  const Shape& s = domain.shape();
  if (const auto* d = std::get_if<Disk>(&s)) return 2 * d->radius;
  std::vector<Point> pts;
  std::vector<Point> storage;
  if (const auto* v = polygon_vertices_ptr(s, storage)) {
    pts = *v;
  } else {
    for (const auto& bp : boundary_sample(domain, n)) pts.push_back(bp.position);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (pts[i] - pts[j]).squaredNorm());
  return std::sqrt(best);
}

StripStats strip_stats(const Domain& domain, int n_directions) {
  if (n_directions < 90) throw std::invalid_argument("strip_stats needs at least 90 directions");
  StripStats st;
  if (const auto* d = std::get_if<Disk>(&domain.shape())) {
    for (int k = 0; k < n_directions; ++k) st.width_by_direction.push_back({kPi * k / n_directions, 2 * d->radius});
    st.min_width = st.max_min_width_over_directions = 2 * d->radius;
    return st;
  }
  const auto pts = support_points(domain);
  std::vector<double> angles;
  for (int k = 0; k < n_directions; ++k) angles.push_back(kPi * k / n_directions);
  std::vector<Point> storage;
  if (const auto* v = polygon_vertices_ptr(domain.shape(), storage)) {
    // The minimal width of a polygon is attained orthogonally to an edge.
    for (std::size_t i = 0; i < v->size(); ++i) {
      const Point e = (*v)[(i + 1) % v->size()] - (*v)[i];
      angles.push_back(wrap_angle_pi(std::atan2(e.y(), e.x()) + 0.5 * kPi));
    }
  }
  for (double a : angles) st.width_by_direction.push_back({a, width_along(pts, a)});
  // Refine both extremes locally around the best sampled direction.
  auto refine = [&](bool maximize) {
    const auto it = std::ranges::min_element(st.width_by_direction, [&](const auto& x, const auto& y) {
      return maximize ? x.width > y.width : x.width < y.width;
    });
    const double step = kPi / n_directions;
    const double a = golden([&](double t) { return width_along(pts, t); }, it->angle - step, it->angle + step,
                            maximize);
    st.width_by_direction.push_back({wrap_angle_pi(a), width_along(pts, a)});
  };
  refine(false);
  refine(true);
  std::ranges::sort(st.width_by_direction, {}, &DirectionalWidth::angle);
  st.min_width = std::ranges::min(st.width_by_direction, {}, &DirectionalWidth::width).width;
  st.max_min_width_over_directions = std::ranges::max(st.width_by_direction, {}, &DirectionalWidth::width).width;
  return st;
}

std::pair<double, double> area_perimeter(const Domain& domain) {
  return std::visit(
      overloaded{
          [](const Disk& d) { return std::pair{kPi * d.radius * d.radius, 2 * kPi * d.radius}; },
          [](const Rectangle& r) { return std::pair{r.width * r.height, 2 * (r.width + r.height)}; },
          [](const Polygon& p) { return std::pair{signed_area(p.vertices), cumulative_length(p.vertices).back()}; },
          [](const Implicit& im) {
            // Polar quadrature of the indicator around the seed; periodic
            // trapezoid rule on the traced ray radii.
            double area = 0.0;
            for (double r : im.ray_radius) area += r * r;
            area *= 0.5 * 2 * kPi / im.ray_radius.size();
            std::vector<Point> half;
            for (std::size_t i = 0; i < im.loop.size(); i += 2) half.push_back(im.loop[i]);
            const double fine = cumulative_length(im.loop).back();
            const double coarse = cumulative_length(half).back();
            return std::pair{area, fine + (fine - coarse) / 3.0};
          },
      },
      domain.shape());
}

ExteriorCircle exterior_circle_radius(const Domain& domain, int n) {
  const auto samples = boundary_sample(domain, n);
  const double diam = diameter(domain);
  double kappa_max = 0.0;
  for (const auto& bp : samples)
    if (!bp.nonsmooth) kappa_max = std::max(kappa_max, bp.curvature);
  double radius = 0.5 * diam;
  if (kappa_max > 0.0) radius = std::min(radius, 1.0 / kappa_max);

  std::vector<Point> obstacles;
  for (const auto& bp : samples) obstacles.push_back(bp.position);
  std::vector<Point> storage;
  if (const auto* v = polygon_vertices_ptr(domain.shape(), storage))
    obstacles.insert(obstacles.end(), v->begin(), v->end());

  for (const auto& bp : samples) {
    if (bp.nonsmooth) continue;
    for (const auto& q : obstacles) {
      const Point d = bp.position - q;
      const double dn = d.dot(bp.inward_normal);
      const double d2 = d.squaredNorm();
      if (d2 == 0.0 || dn <= 1e-12 * std::sqrt(d2)) continue;
      radius = std::min(radius, d2 / (2 * dn));
    }
  }
  return {radius, radius > 1e-9 * diam};
}

double boundary_distance(const Domain& domain, const Point& p, int samples) {
  const Shape& s = domain.shape();
  if (const auto* d = std::get_if<Disk>(&s)) return std::abs(d->radius - (p - d->center).norm());
  std::vector<Point> storage;
  const std::vector<Point>* v = polygon_vertices_ptr(s, storage);
  std::vector<Point> loop;
  if (!v) {
    if (const auto* im = std::get_if<Implicit>(&s); im && samples <= 0) {
      v = &im->loop;
    } else {
      for (const auto& bp : boundary_sample(domain, std::max(samples, 4))) loop.push_back(bp.position);
      v = &loop;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v->size(); ++i)
    best = std::min(best, segment_distance(p, (*v)[i], (*v)[(i + 1) % v->size()]));
  return best;
}

double inradius(const Domain& domain) {
  if (const auto* d = std::get_if<Disk>(&domain.shape())) return d->radius;
  // Precompute one boundary polyline and reuse it for every candidate.
  std::vector<Point> storage;
  std::vector<Point> loop;
  if (const auto* v = polygon_vertices_ptr(domain.shape(), storage)) {
    loop = *v;
  } else {
    loop = std::get<Implicit>(domain.shape()).loop;
  }
  auto dist = [&](const Point& p) {
    if (!domain.contains(p)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < loop.size(); ++i)
      best = std::min(best, segment_distance(p, loop[i], loop[(i + 1) % loop.size()]));
    return best;
  };
  const Box box = domain.bounding_box();
  const double diam = diameter(domain);
  const double target = diam / 512.0;
  const int m = 48;
  struct Cand {
    Point p;
    double r;
  };
  std::vector<Cand> cands;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j) {
      const Point p = box.min() + Point(box.sizes().x() * i / m, box.sizes().y() * j / m);
      cands.push_back({p, dist(p)});
    }
  std::ranges::sort(cands, std::greater<>{}, &Cand::r);
  cands.resize(std::min<std::size_t>(cands.size(), 12));
  double best = 0.0;
  for (auto c : cands) {
    double step = box.sizes().maxCoeff() / m;
    while (step > target) {
      step *= 0.5;
      Cand local = c;
      for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) {
          const Point p = c.p + step * Point(i, j);
          const double r = dist(p);
          if (r > local.r) local = {p, r};
        }
      c = local;
    }
    best = std::max(best, c.r);
  }
  return best;
}

bool is_convex(const Domain& domain) {
  std::vector<Point> storage;
  if (const auto* v = polygon_vertices_ptr(domain.shape(), storage)) {
    const std::size_t n = v->size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = (*v)[(i + 1) % n] - (*v)[i];
      const Point b = (*v)[(i + 2) % n] - (*v)[(i + 1) % n];
      if (cross(a, b) < -1e-14 * a.norm() * b.norm()) return false;
    }
    return true;
  }
  return curvature_range(domain).kappa_min >= -1e-9;
}

}  // namespace cmc
