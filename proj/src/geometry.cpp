#include "passage/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace passage {

namespace {

// Integer power; exact sign handling for the even superellipse exponents.
double ipow(double x, int p) {
  double result = 1.0;
  for (int i = 0; i < p; ++i) result *= x;
  return result;
}

CurvePoint local_point(const Circle& c, double a) {
  const double co = std::cos(a), si = std::sin(a);
  return {c.radius * Vec2(co, si), c.radius * Vec2(-si, co), -c.radius * Vec2(co, si)};
}

CurvePoint local_point(const Ellipse& e, double a) {
  const double co = std::cos(a), si = std::sin(a);
  return {Vec2(e.semi_x * co, e.semi_y * si), Vec2(-e.semi_x * si, e.semi_y * co),
          Vec2(-e.semi_x * co, -e.semi_y * si)};
}

// Radial curves y = r(a)(cos a, sin a).
CurvePoint polar_point(double r, double dr, double d2r, double a) {
  const Vec2 er(std::cos(a), std::sin(a)), et(-std::sin(a), std::cos(a));
  return {r * er, dr * er + r * et, (d2r - r) * er + 2.0 * dr * et};
}

CurvePoint local_point(const FourierCurve& f, double a) {
  double r = f.r0, dr = 0.0, d2r = 0.0;
  for (std::size_t i = 0; i < f.cos_coeffs.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    const double co = std::cos(k * a), si = std::sin(k * a);
    r += f.cos_coeffs[i] * co;
    dr -= k * f.cos_coeffs[i] * si;
    d2r -= k * k * f.cos_coeffs[i] * co;
  }
  for (std::size_t i = 0; i < f.sin_coeffs.size(); ++i) {
    const double k = static_cast<double>(i + 1);
    const double co = std::cos(k * a), si = std::sin(k * a);
    r += f.sin_coeffs[i] * si;
    dr += k * f.sin_coeffs[i] * co;
    d2r -= k * k * f.sin_coeffs[i] * si;
  }
  return polar_point(r, dr, d2r, a);
}

CurvePoint superellipse_point(double half_w, double half_h, int p, double a) {
  const double co = std::cos(a), si = std::sin(a);
  const double x = co / half_w, y = si / half_h;
  const double dx = -si / half_w, dy = co / half_h;
  const double u = ipow(x, p) + ipow(y, p);
  const double du = p * (ipow(x, p - 1) * dx + ipow(y, p - 1) * dy);
  const double d2u = p * ((p - 1) * ipow(x, p - 2) * dx * dx - ipow(x, p) +
                          (p - 1) * ipow(y, p - 2) * dy * dy - ipow(y, p));
  const double inv_p = 1.0 / p;
  const double r = std::pow(u, -inv_p);
  const double dr = -inv_p * r / u * du;
  const double d2r = -inv_p * r * ((-inv_p - 1.0) * du * du / (u * u) + d2u / u);
  return polar_point(r, dr, d2r, a);
}

CurvePoint local_point(const RoundedRectangle& rr, double a) {
  if (rr.exponent < 2) throw std::logic_error("rounded_rectangle: exponent not resolved");
  return superellipse_point(0.5 * rr.width, 0.5 * rr.height, rr.exponent, a);
}

// Tube around the spiral centerline. With phi the curve parameter:
//   u(phi) = u_mid - A cos(phi),  A = pi * turns
//   o(phi) = K sin(phi) / sqrt(sin^2(phi) + eps^2),  K = (w/2) sqrt(1 + eps^2)
//   x = c(u) + o N(u),  N = right-hand unit normal of c
// phi in (0, pi) runs outward along the right side, (pi, 2pi) back along
// the left side; this is counterclockwise.
CurvePoint local_point(const SpiralChannel& sp, double phi) {
  const double b = sp.pitch / kTwoPi;
  const double amp = kPi * sp.turns;
  const double u_mid = sp.start_angle + amp;
  const double sphi = std::sin(phi), cphi = std::cos(phi);
  const double u = u_mid - amp * cphi;
  const double du = amp * sphi, d2u = amp * cphi;

  const double eps2 = sp.cap_shape * sp.cap_shape;
  const double k = 0.5 * sp.thickness * std::sqrt(1.0 + eps2);
  const double dd = sphi * sphi + eps2;
  const double o = k * sphi / std::sqrt(dd);
  const double dO = k * eps2 * cphi / (dd * std::sqrt(dd));
  const double d2O = -k * eps2 * sphi * (dd + 3.0 * cphi * cphi) / (dd * dd * std::sqrt(dd));

  const double rho = sp.inner_radius + b * (u - sp.start_angle);
  const Vec2 er(std::cos(u), std::sin(u)), et(-std::sin(u), std::cos(u));
  const Vec2 c = rho * er;
  const Vec2 v = b * er + rho * et;                 // c'
  const Vec2 vu = 2.0 * b * et - rho * er;          // c''
  const Vec2 vuu = -3.0 * b * er - rho * et;        // c'''

  const double g = v.norm();
  const double gu = v.dot(vu) / g;
  const double guu = (vu.squaredNorm() + v.dot(vuu)) / g - gu * gu / g;
  const Vec2 t = v / g;
  const Vec2 tu = vu / g - v * gu / (g * g);
  const Vec2 tuu = vuu / g - 2.0 * vu * gu / (g * g) - v * guu / (g * g) + 2.0 * v * gu * gu / (g * g * g);
  const auto right = [](const Vec2& a) { return Vec2(a.y(), -a.x()); };
  const Vec2 nn = right(t), nu = right(tu), nuu = right(tuu);

  CurvePoint out;
  out.position = c + o * nn;
  out.d1 = v * du + dO * nn + o * nu * du;
  out.d2 = vu * du * du + v * d2u + d2O * nn + 2.0 * dO * nu * du + o * (nuu * du * du + nu * d2u);
  return out;
}

Eigen::Matrix2d rotation_matrix(double angle) {
  Eigen::Matrix2d r;
  const double c = std::cos(angle), s = std::sin(angle);
  r << c, -s, s, c;
  return r;
}

Vec2 to_local(const Shape& shape, const Vec2& x) {
  return rotation_matrix(-shape.rotation) * (x - shape.center);
}

Eigen::Matrix2Xd outline(const Shape& shape, int points) {
  Eigen::Matrix2Xd out(2, points);
  for (int i = 0; i < points; ++i) out.col(i) = evaluate(shape, kTwoPi * i / points).position;
  return out;
}

// Even-odd crossing test against a closed polygon.
bool polygon_contains(const Eigen::Matrix2Xd& poly, const Vec2& x) {
  bool inside = false;
  const Eigen::Index n = poly.cols();
  for (Eigen::Index i = 0, j = n - 1; i < n; j = i++) {
    const double yi = poly(1, i), yj = poly(1, j);
    if ((yi > x.y()) != (yj > x.y())) {
      const double cross = poly(0, j) + (x.y() - yj) * (poly(0, i) - poly(0, j)) / (yi - yj);
      if (x.x() < cross) inside = !inside;
    }
  }
  return inside;
}

struct Nearest {
  double alpha;
  double distance;
  bool inside_side;  // (x - y) . n < 0
};

// Closest curve point by Newton on (y(a) - x) . y'(a) = 0 started from the
// nearest outline vertex.
Nearest nearest_point(const Shape& shape, const Eigen::Matrix2Xd& poly, const Vec2& x) {
  Eigen::Index best = 0;
  (poly.colwise() - x).colwise().squaredNorm().minCoeff(&best);
  const double step = kTwoPi / static_cast<double>(poly.cols());
  double a = step * static_cast<double>(best);
  const double lo = a - step, hi = a + step;
  for (int it = 0; it < 30; ++it) {
    const CurvePoint p = evaluate(shape, a);
    const Vec2 d = p.position - x;
    const double f = d.dot(p.d1);
    const double df = p.d1.squaredNorm() + d.dot(p.d2);
    if (df <= 0.0) break;
    const double next = std::clamp(a - f / df, lo, hi);
    if (std::abs(next - a) < 1e-15) {
      a = next;
      break;
    }
    a = next;
  }
  const CurvePoint p = evaluate(shape, a);
  const Vec2 normal(p.d1.y(), -p.d1.x());
  const Vec2 d = x - p.position;
  return {a, d.norm(), d.dot(normal) < 0.0};
}

double max_edge_length(const Eigen::Matrix2Xd& poly) {
  double m = 0.0;
  const Eigen::Index n = poly.cols();
  for (Eigen::Index i = 0; i < n; ++i) m = std::max(m, (poly.col((i + 1) % n) - poly.col(i)).norm());
  return m;
}

bool generic_inside(const Shape& shape, const Eigen::Matrix2Xd& poly, double max_edge, const Vec2& x) {
  const bool crude = polygon_contains(poly, x);
  // The polygon deviates from the curve by at most ~max_edge^2 * kappa / 8;
  // refine only in a band of one edge length.
  Eigen::Index best = 0;
  const double nearest_vertex = std::sqrt((poly.colwise() - x).colwise().squaredNorm().minCoeff(&best));
  if (nearest_vertex > max_edge) return crude;
  const Nearest near = nearest_point(shape, poly, x);
  if (near.distance == 0.0) return false;
  return near.inside_side;
}

int round_to_even(double value) {
  const int n = static_cast<int>(std::lround(value / 2.0)) * 2;
  return std::max(n, 4);
}

}  // namespace

RoundedRectangle make_rounded_rectangle(double width, double height, double corner_radius) {
  if (!(width > 0.0) || !(height > 0.0) || !(corner_radius > 0.0)) {
    throw std::invalid_argument("rounded_rectangle: width, height and corner_radius must be positive");
  }
  constexpr int kSamples = 16384;
  constexpr int kMaxExponent = 128;
  RoundedRectangle rr{width, height, corner_radius, 0};
  for (int p = 2; p <= kMaxExponent; p += 2) {
    double max_curvature = 0.0;
    for (int i = 0; i < kSamples / 4; ++i) {  // one quadrant suffices by symmetry
      const double a = 0.5 * kPi * (i + 0.5) / (kSamples / 4);
      const CurvePoint c = superellipse_point(0.5 * width, 0.5 * height, p, a);
      const double speed = c.d1.norm();
      const double kappa = (c.d1.x() * c.d2.y() - c.d1.y() * c.d2.x()) / (speed * speed * speed);
      max_curvature = std::max(max_curvature, kappa);
    }
    if (max_curvature * corner_radius > 1.0) break;
    rr.exponent = p;
  }
  if (rr.exponent == 0) {
    throw std::invalid_argument("rounded_rectangle: corner_radius too large for the given dimensions");
  }
  return rr;
}

void validate_shape(const Shape& shape) {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!shape.center.allFinite() || !std::isfinite(shape.rotation)) fail("shape: non-finite center or rotation");
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Circle>) {
          if (!(p.radius > 0.0)) fail("circle: radius must be positive");
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          if (!(p.semi_x > 0.0) || !(p.semi_y > 0.0)) fail("ellipse: semi-axes must be positive");
        } else if constexpr (std::is_same_v<T, FourierCurve>) {
          double bound = 0.0;
          for (double c : p.cos_coeffs) bound += std::abs(c);
          for (double c : p.sin_coeffs) bound += std::abs(c);
          if (!(p.r0 > 0.0)) fail("fourier_curve: r0 must be positive");
          // Only sample when the coefficient bound cannot rule out r <= 0.
          for (int i = 0; i < 4096 && bound >= p.r0; ++i) {
            const double a = kTwoPi * i / 4096;
            if (local_point(p, a).position.dot(Vec2(std::cos(a), std::sin(a))) <= 0.0) {
              fail("fourier_curve: radius must stay positive");
            }
          }
        } else if constexpr (std::is_same_v<T, RoundedRectangle>) {
          if (!(p.width > 0.0) || !(p.height > 0.0) || !(p.corner_radius > 0.0)) {
            fail("rounded_rectangle: dimensions must be positive");
          }
          if (p.exponent < 2 || p.exponent % 2 != 0) fail("rounded_rectangle: exponent must be even and >= 2");
        } else if constexpr (std::is_same_v<T, SpiralChannel>) {
          if (!(p.turns > 0.0)) fail("spiral_channel: turns must be positive");
          if (!(p.thickness > 0.0)) fail("spiral_channel: thickness must be positive");
          if (!(p.pitch > p.thickness)) fail("spiral_channel: pitch must exceed thickness so turns do not overlap");
          if (!(p.inner_radius > p.thickness)) fail("spiral_channel: inner_radius must exceed thickness");
          if (!(p.cap_shape > 0.0 && p.cap_shape < 1.0)) fail("spiral_channel: cap_shape must lie in (0, 1)");
        }
      },
      shape.params);
}

CurvePoint evaluate(const Shape& shape, double alpha) {
  const CurvePoint local = std::visit([alpha](const auto& p) { return local_point(p, alpha); }, shape.params);
  if (shape.rotation == 0.0) {
    return {local.position + shape.center, local.d1, local.d2};
  }
  const Eigen::Matrix2d r = rotation_matrix(shape.rotation);
  return {r * local.position + shape.center, r * local.d1, r * local.d2};
}

std::string shape_kind(const Shape& shape) {
  static const char* const kNames[] = {"circle", "ellipse", "fourier_curve", "rounded_rectangle",
                                       "spiral_channel"};
  return kNames[shape.params.index()];
}

int Scene::num_dirichlet() const {
  return static_cast<int>(std::count_if(bodies.begin(), bodies.end(), [](const Body& b) {
    return b.bc == BoundaryCondition::kDirichlet;
  }));
}

Scene make_scene(std::vector<Body> bodies, Vec2 source, std::string name, std::string description) {
  if (!source.allFinite()) throw std::invalid_argument("scene: source must be finite");
  for (const Body& b : bodies) {
    validate_shape(b.shape);
    if (!(b.resolution > 0.0) || !std::isfinite(b.resolution)) {
      throw std::invalid_argument("scene: body resolution must be positive");
    }
  }
  std::stable_partition(bodies.begin(), bodies.end(),
                        [](const Body& b) { return b.bc == BoundaryCondition::kDirichlet; });

  constexpr int kCheckPoints = 1024;
  std::vector<Eigen::Matrix2Xd> outlines;
  for (const Body& b : bodies) outlines.push_back(outline(b.shape, kCheckPoints));
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const std::string who = bodies[i].label.empty() ? "body " + std::to_string(i) : bodies[i].label;
    if (point_in_body(bodies[i].shape, source) || distance_to_curve(bodies[i].shape, source) < 1e-8) {
      throw std::invalid_argument("scene: source lies inside or on " + who);
    }
    for (std::size_t j = 0; j < bodies.size(); ++j) {
      if (i == j) continue;
      for (Eigen::Index c = 0; c < outlines[i].cols(); ++c) {
        if (point_in_body(bodies[j].shape, outlines[i].col(c))) {
          throw std::invalid_argument("scene: bodies " + std::to_string(i) + " and " + std::to_string(j) +
                                      " overlap");
        }
      }
    }
  }
  return Scene{std::move(bodies), source, std::move(name), std::move(description)};
}

DiscretizedBody discretize(const Body& body, int n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("discretize: N must be even and >= 4");
  DiscretizedBody d;
  d.n = n;
  d.h = kTwoPi / n;
  d.bc = body.bc;
  d.nodes.resize(2, n);
  d.normals.resize(2, n);
  d.curvature.resize(n);
  d.jacobian.resize(n);
  for (int i = 0; i < n; ++i) {
    const CurvePoint c = evaluate(body.shape, d.h * i);
    const double speed = c.d1.norm();
    if (!(speed > 1e-12)) throw std::invalid_argument("discretize: vanishing Jacobian");
    d.nodes.col(i) = c.position;
    d.normals.col(i) = Vec2(c.d1.y(), -c.d1.x()) / speed;
    d.jacobian(i) = speed;
    d.curvature(i) = (c.d1.x() * c.d2.y() - c.d1.y() * c.d2.x()) / (speed * speed * speed);
  }
  return d;
}

int body_node_count(const Body& body, int base_n) { return round_to_even(base_n * body.resolution); }

DiscretizedScene discretize(const Scene& scene, int base_n) {
  DiscretizedScene out;
  out.source = scene.source;
  out.num_dirichlet = scene.num_dirichlet();
  for (const Body& b : scene.bodies) out.bodies.push_back(discretize(b, body_node_count(b, base_n)));
  return out;
}

int DiscretizedScene::total_nodes() const {
  int total = 0;
  for (const auto& b : bodies) total += b.n;
  return total;
}

int DiscretizedScene::offset(int k) const {
  int total = 0;
  for (int i = 0; i < k; ++i) total += bodies[i].n;
  return total;
}

double min_separation(const DiscretizedScene& scene) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < scene.bodies.size(); ++i) {
    for (std::size_t j = i + 1; j < scene.bodies.size(); ++j) {
      const auto& a = scene.bodies[i].nodes;
      const auto& b = scene.bodies[j].nodes;
      for (Eigen::Index c = 0; c < a.cols(); ++c) {
        best = std::min(best, std::sqrt((b.colwise() - a.col(c)).colwise().squaredNorm().minCoeff()));
      }
    }
  }
  return best;
}

double max_node_spacing(const DiscretizedScene& scene) {
  double m = 0.0;
  for (const auto& b : scene.bodies) m = std::max(m, b.jacobian.maxCoeff() * b.h);
  return m;
}

double confining_ratio(double reflector_radius, double ring_radius, int count) {
  const double side = 2.0 * ring_radius * std::sin(kPi / count);
  if (reflector_radius <= 0.0) return 1.0;
  if (reflector_radius >= 0.5 * side) return 0.0;
  return 1.0 - 2.0 * reflector_radius / side;
}

std::optional<ReflectorRing> find_reflector_ring(const Scene& scene) {
  std::vector<Vec2> centers;
  double radius = -1.0;
  for (const Body& body : scene.bodies) {
    const auto* c = std::get_if<Circle>(&body.shape.params);
    if (body.bc != BoundaryCondition::kNeumann || c == nullptr) continue;
    if (radius < 0.0) radius = c->radius;
    if (std::abs(c->radius - radius) > 1e-9 * radius) return std::nullopt;
    centers.push_back(body.shape.center);
  }
  const int count = static_cast<int>(centers.size());
  if (count < 3) return std::nullopt;
  Vec2 mid = Vec2::Zero();
  for (const Vec2& c : centers) mid += c / count;
  const double ring = (centers[0] - mid).norm();
  std::vector<double> angles;
  for (const Vec2& c : centers) {
    if (std::abs((c - mid).norm() - ring) > 1e-9 * ring) return std::nullopt;
    angles.push_back(std::atan2(c.y() - mid.y(), c.x() - mid.x()));
  }
  std::sort(angles.begin(), angles.end());
  for (int k = 0; k < count; ++k) {
    const double gap = k + 1 < count ? angles[k + 1] - angles[k] : angles[0] + 2.0 * kPi - angles[k];
    if (std::abs(gap - 2.0 * kPi / count) > 1e-9) return std::nullopt;
  }
  return ReflectorRing{count, radius, ring, mid, confining_ratio(radius, ring, count)};
}

bool point_in_body(const Shape& shape, const Vec2& x) {
  if (const auto* c = std::get_if<Circle>(&shape.params)) {
    return (x - shape.center).norm() < c->radius;
  }
  if (const auto* e = std::get_if<Ellipse>(&shape.params)) {
    const Vec2 p = to_local(shape, x);
    const double qx = p.x() / e->semi_x, qy = p.y() / e->semi_y;
    return qx * qx + qy * qy < 1.0;
  }
  const Eigen::Matrix2Xd poly = outline(shape, 4096);
  return generic_inside(shape, poly, max_edge_length(poly), x);
}

double distance_to_curve(const Shape& shape, const Vec2& x) {
  if (const auto* c = std::get_if<Circle>(&shape.params)) {
    return std::abs((x - shape.center).norm() - c->radius);
  }
  return nearest_point(shape, outline(shape, 4096), x).distance;
}

SceneMask::SceneMask(const Scene& scene, int outline_points) {
  for (const Body& b : scene.bodies) {
    Outline o{&b.shape, outline(b.shape, outline_points), Vec2::Zero(), Vec2::Zero(), 0.0};
    o.max_edge = max_edge_length(o.points);
    o.lo = o.points.rowwise().minCoeff().array() - o.max_edge;
    o.hi = o.points.rowwise().maxCoeff().array() + o.max_edge;
    outlines_.push_back(std::move(o));
  }
}

int SceneMask::body_containing(const Vec2& x) const {
  for (std::size_t k = 0; k < outlines_.size(); ++k) {
    const Outline& o = outlines_[k];
    if ((x.array() < o.lo.array()).any() || (x.array() > o.hi.array()).any()) continue;
    const bool inside = std::holds_alternative<Circle>(o.shape->params) ||
                                std::holds_alternative<Ellipse>(o.shape->params)
                            ? point_in_body(*o.shape, x)
                            : generic_inside(*o.shape, o.points, o.max_edge, x);
    if (inside) return static_cast<int>(k);
  }
  return -1;
}

double SceneMask::boundary_distance(const Vec2& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Outline& o : outlines_) {
    const double crude = std::sqrt((o.points.colwise() - x).colwise().squaredNorm().minCoeff());
    if (crude - o.max_edge > best) continue;
    best = std::min(best, crude > 2.0 * o.max_edge ? crude : nearest_point(*o.shape, o.points, x).distance);
  }
  return best;
}

}  // namespace passage
