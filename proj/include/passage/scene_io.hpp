#pragma once

// Scene files: UTF-8 JSON documents of the form
//
//   {
//     "name": "disc", "description": "...",          (optional)
//     "source": [x, y],
//     "bodies": [
//       {"kind": "circle", "params": {"radius": 1.0},
//        "center": [0, 0], "rotation": 0.0,             (optional)
//        "bc": "dirichlet" | "neumann",
//        "label": "trap", "resolution": 1.0}            (optional)
//     ]
//   }
//
// Parameters per kind:
//   circle             radius
//   ellipse            semi_x, semi_y
//   fourier_curve      r0, cos (list, optional), sin (list, optional)
//   rounded_rectangle  width, height, corner_radius
//   spiral_channel     inner_radius, pitch, turns, thickness, start_angle,
//                      cap_shape (all optional, defaults in geometry.hpp)
//
// Unknown keys are rejected at every level.

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "passage/geometry.hpp"

namespace passage {

/// Malformed or invalid scene description. Syntax errors carry 1-based
/// line and column; semantic errors carry a JSON path such as
/// "bodies[2].params.radius".
class SceneError : public std::runtime_error {
 public:
  SceneError(const std::string& message, int line = 0, int column = 0)
      : std::runtime_error(message), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Scene parse_scene(const std::string& text);

/// Reads and parses a file; I/O failures throw std::ios_base::failure.
Scene load_scene(const std::string& path);

nlohmann::ordered_json scene_to_json(const Scene& scene);

/// FNV-1a 64-bit hash of the canonical JSON form, as 16 hex digits.
std::string scene_hash(const Scene& scene);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace passage
