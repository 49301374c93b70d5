#pragma once

// Smooth closed bodies, scenes and their trapezoid (Nystrom) discretization.
//
// Every shape is a counterclockwise C-infinity parameterization y(alpha),
// alpha in [0, 2pi), with analytic first and second derivatives, so the
// outward normal is (y2', -y1')/|y'| and the signed curvature is
// (y1' y2'' - y2' y1'')/|y'|^3 (positive on convex parts).

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "passage/types.hpp"

namespace passage {

enum class BoundaryCondition { kDirichlet, kNeumann };

struct Circle {
  double radius = 1.0;
};

struct Ellipse {
  double semi_x = 1.0;
  double semi_y = 1.0;
};

/// Star-shaped curve r(a) = r0 + sum_k (cos_k cos(k a) + sin_k sin(k a)),
/// k starting at 1.
struct FourierCurve {
  double r0 = 1.0;
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};

/// Polar superellipse |x/a|^p + |y/b|^p = 1 with even p chosen as large as
/// possible while the minimum radius of curvature stays >= corner_radius.
struct RoundedRectangle {
  double width = 2.0;
  double height = 1.0;
  double corner_radius = 0.1;
  int exponent = 0;  // resolved by make_rounded_rectangle
};

/// Closed channel of constant thickness around the Archimedean arc
/// c(u) = (inner_radius + pitch (u - start_angle)/2pi)(cos u, sin u),
/// u in [start_angle, start_angle + 2pi turns], with rounded caps whose
/// bluntness is set by cap_shape (smaller is blunter).
struct SpiralChannel {
  double inner_radius = 2.0;
  double pitch = 2.0;
  double turns = 1.5;
  double thickness = 0.5;
  double start_angle = kPi;
  double cap_shape = 0.15;
};

using ShapeParams = std::variant<Circle, Ellipse, FourierCurve, RoundedRectangle, SpiralChannel>;

struct Shape {
  ShapeParams params;
  Vec2 center = Vec2::Zero();
  double rotation = 0.0;
};

/// Position and parameter derivatives of a curve at one parameter value.
struct CurvePoint {
  Vec2 position;
  Vec2 d1;
  Vec2 d2;
};

/// Resolves the exponent; throws std::invalid_argument when no even
/// exponent >= 2 meets the corner radius or the dimensions are invalid.
RoundedRectangle make_rounded_rectangle(double width, double height, double corner_radius);

/// Checks parameter ranges (positive radii, r(a) > 0 for Fourier curves,
/// spiral turns that do not overlap). Throws std::invalid_argument.
void validate_shape(const Shape& shape);

CurvePoint evaluate(const Shape& shape, double alpha);

/// Human-readable kind name as used in scene files.
std::string shape_kind(const Shape& shape);

struct Body {
  Shape shape;
  BoundaryCondition bc = BoundaryCondition::kDirichlet;
  std::string label;
  /// Node count multiplier relative to the base N of a run.
  double resolution = 1.0;
};

struct Scene {
  std::vector<Body> bodies;  // Dirichlet bodies first
  Vec2 source = Vec2::Zero();
  std::string name;
  std::string description;

  int num_dirichlet() const;
  int num_neumann() const { return static_cast<int>(bodies.size()) - num_dirichlet(); }
};

/// Orders bodies Dirichlet-first (stable) and checks that the source lies
/// outside every body and that bodies are pairwise disjoint.
/// Throws std::invalid_argument.
Scene make_scene(std::vector<Body> bodies, Vec2 source, std::string name = {},
                 std::string description = {});

struct DiscretizedBody {
  int n = 0;
  double h = 0.0;  // 2pi/n
  BoundaryCondition bc = BoundaryCondition::kDirichlet;
  Eigen::Matrix2Xd nodes;
  Eigen::Matrix2Xd normals;
  VectorXd curvature;
  VectorXd jacobian;

  /// Trapezoid perimeter sum_n jacobian_n h.
  double perimeter() const { return jacobian.sum() * h; }
};

/// Throws std::invalid_argument for odd n, n < 4, or a vanishing Jacobian.
DiscretizedBody discretize(const Body& body, int n);

struct DiscretizedScene {
  std::vector<DiscretizedBody> bodies;
  Vec2 source = Vec2::Zero();
  int num_dirichlet = 0;

  int total_nodes() const;
  /// Index of the first unknown of body k in the stacked density vector.
  int offset(int k) const;
};

/// Discretizes each body with round-to-even(base_n * resolution) nodes.
DiscretizedScene discretize(const Scene& scene, int base_n);

/// Node count used for a body at a given base N.
int body_node_count(const Body& body, int base_n);

/// Minimum inter-node distance over distinct body pairs; +inf for fewer
/// than two bodies.
double min_separation(const DiscretizedScene& scene);

/// Largest node spacing jacobian * h over the scene.
double max_node_spacing(const DiscretizedScene& scene);

/// Fraction of the regular polygon through the reflector centers that lies
/// outside the reflectors: 1 - 2a/side, clamped to 0.
double confining_ratio(double reflector_radius, double ring_radius = 3.0, int count = 8);

struct ReflectorRing {
  int count = 0;
  double reflector_radius = 0.0;
  double ring_radius = 0.0;
  Vec2 center = Vec2::Zero();
  double rho = 1.0;
};

/// Recognizes three or more equal reflecting circles evenly spaced on a
/// circle. Other bodies are ignored.
std::optional<ReflectorRing> find_reflector_ring(const Scene& scene);

/// True iff x is strictly inside the closed curve. Points within ~1e-10 of
/// the curve may report either value.
bool point_in_body(const Shape& shape, const Vec2& x);

/// Distance from x to the curve, measured by Newton refinement on a dense
/// polygon.
double distance_to_curve(const Shape& shape, const Vec2& x);

/// Cached outlines for repeated inside tests (heat-map masks).
class SceneMask {
 public:
  explicit SceneMask(const Scene& scene, int outline_points = 4096);
  /// Index of the body containing x, or -1.
  int body_containing(const Vec2& x) const;
  /// Distance to the nearest boundary (outline based, refined near curves).
  double boundary_distance(const Vec2& x) const;

 private:
  struct Outline {
    const Shape* shape;
    Eigen::Matrix2Xd points;
    Vec2 lo, hi;
    double max_edge;
  };
  std::vector<Outline> outlines_;
};

}  // namespace passage
