#pragma once

// Small scene builders shared by the unit and acceptance tests.

#include <cmath>

#include "passage/geometry.hpp"

namespace passage::testing {

inline Body circle_body(double radius, Vec2 center = Vec2::Zero(),
                        BoundaryCondition bc = BoundaryCondition::kDirichlet, double resolution = 1.0) {
  Body b;
  b.shape.params = Circle{radius};
  b.shape.center = center;
  b.bc = bc;
  b.resolution = resolution;
  return b;
}

/// Unit absorbing disc at the origin with the source at (R, 0).
inline Scene disc_scene(double source_radius = 2.0) {
  return make_scene({circle_body(1.0, Vec2::Zero(), BoundaryCondition::kDirichlet)}, Vec2(source_radius, 0.0));
}

/// Unit absorber at the origin ringed by eight reflecting discs on the
/// circle of radius 3; source at (5, 0).
inline Scene faraday_scene(double reflector_radius, double reflector_resolution = 1.0) {
  std::vector<Body> bodies{circle_body(1.0, Vec2::Zero(), BoundaryCondition::kDirichlet)};
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * kPi * k / 8.0;
    bodies.push_back(circle_body(reflector_radius, 3.0 * Vec2(std::cos(a), std::sin(a)),
                                 BoundaryCondition::kNeumann, reflector_resolution));
  }
  return make_scene(std::move(bodies), Vec2(5.0, 0.0));
}

}  // namespace passage::testing
