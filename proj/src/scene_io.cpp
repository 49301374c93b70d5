#include "passage/scene_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace passage {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw SceneError(path.empty() ? message : path + ": " + message);
}

void allow_keys(const json& object, const std::string& path, const std::set<std::string>& allowed) {
  if (!object.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : object.items()) {
    if (!allowed.count(key)) fail(path, "unknown key '" + key + "'");
  }
}

const json& require(const json& object, const std::string& key, const std::string& path) {
  const auto it = object.find(key);
  if (it == object.end()) fail(path, "missing key '" + key + "'");
  return *it;
}

double number(const json& value, const std::string& path) {
  if (!value.is_number()) fail(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

double number_or(const json& object, const std::string& key, double fallback, const std::string& path) {
  const auto it = object.find(key);
  return it == object.end() ? fallback : number(*it, path + "." + key);
}

Vec2 point(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 2) fail(path, "expected [x, y]");
  return Vec2(number(value[0], path + "[0]"), number(value[1], path + "[1]"));
}

std::vector<double> number_list(const json& object, const std::string& key, const std::string& path) {
  std::vector<double> out;
  const auto it = object.find(key);
  if (it == object.end()) return out;
  if (!it->is_array()) fail(path + "." + key, "expected a list of numbers");
  for (std::size_t i = 0; i < it->size(); ++i) {
    out.push_back(number((*it)[i], path + "." + key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string text(const json& value, const std::string& path) {
  if (!value.is_string()) fail(path, "expected a string");
  return value.get<std::string>();
}

ShapeParams parse_params(const std::string& kind, const json& params, const std::string& path) {
  if (kind == "circle") {
    allow_keys(params, path, {"radius"});
    return Circle{number(require(params, "radius", path), path + ".radius")};
  }
  if (kind == "ellipse") {
    allow_keys(params, path, {"semi_x", "semi_y"});
    return Ellipse{number(require(params, "semi_x", path), path + ".semi_x"),
                   number(require(params, "semi_y", path), path + ".semi_y")};
  }
  if (kind == "fourier_curve") {
    allow_keys(params, path, {"r0", "cos", "sin"});
    return FourierCurve{number(require(params, "r0", path), path + ".r0"), number_list(params, "cos", path),
                        number_list(params, "sin", path)};
  }
  if (kind == "rounded_rectangle") {
    allow_keys(params, path, {"width", "height", "corner_radius"});
    try {
      return make_rounded_rectangle(number(require(params, "width", path), path + ".width"),
                                    number(require(params, "height", path), path + ".height"),
                                    number(require(params, "corner_radius", path), path + ".corner_radius"));
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  if (kind == "spiral_channel") {
    allow_keys(params, path, {"inner_radius", "pitch", "turns", "thickness", "start_angle", "cap_shape"});
    const SpiralChannel d;
    return SpiralChannel{number_or(params, "inner_radius", d.inner_radius, path),
                         number_or(params, "pitch", d.pitch, path),
                         number_or(params, "turns", d.turns, path),
                         number_or(params, "thickness", d.thickness, path),
                         number_or(params, "start_angle", d.start_angle, path),
                         number_or(params, "cap_shape", d.cap_shape, path)};
  }
  fail(path, "unknown shape kind '" + kind + "'");
}

Body parse_body(const json& value, const std::string& path) {
  allow_keys(value, path, {"kind", "params", "center", "rotation", "bc", "label", "resolution"});
  Body body;
  const std::string kind = text(require(value, "kind", path), path + ".kind");
  body.shape.params = parse_params(kind, require(value, "params", path), path + ".params");
  if (value.contains("center")) body.shape.center = point(value["center"], path + ".center");
  body.shape.rotation = number_or(value, "rotation", 0.0, path);
  const std::string bc = text(require(value, "bc", path), path + ".bc");
  if (bc == "dirichlet") {
    body.bc = BoundaryCondition::kDirichlet;
  } else if (bc == "neumann") {
    body.bc = BoundaryCondition::kNeumann;
  } else {
    fail(path + ".bc", "expected \"dirichlet\" or \"neumann\"");
  }
  if (value.contains("label")) body.label = text(value["label"], path + ".label");
  body.resolution = number_or(value, "resolution", 1.0, path);
  if (!(body.resolution > 0.0)) fail(path + ".resolution", "must be positive");
  try {
    validate_shape(body.shape);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return body;
}

// nlohmann reports a byte offset one past the offending character.
std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json shape_params_json(const ShapeParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Circle>) {
          return {{"radius", p.radius}};
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          return {{"semi_x", p.semi_x}, {"semi_y", p.semi_y}};
        } else if constexpr (std::is_same_v<T, FourierCurve>) {
          return {{"r0", p.r0}, {"cos", p.cos_coeffs}, {"sin", p.sin_coeffs}};
        } else if constexpr (std::is_same_v<T, RoundedRectangle>) {
          return {{"width", p.width}, {"height", p.height}, {"corner_radius", p.corner_radius}};
        } else {
          return {{"inner_radius", p.inner_radius}, {"pitch", p.pitch},           {"turns", p.turns},
                  {"thickness", p.thickness},       {"start_angle", p.start_angle}, {"cap_shape", p.cap_shape}};
        }
      },
      params);
}

}  // namespace

Scene parse_scene(const std::string& source_text) {
  json doc;
  try {
    doc = json::parse(source_text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(source_text, e.byte);
    throw SceneError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what(), line,
                     column);
  }
  allow_keys(doc, "", {"name", "description", "source", "bodies"});
  const Vec2 source = point(require(doc, "source", "scene"), "source");
  const json& bodies_json = require(doc, "bodies", "scene");
  if (!bodies_json.is_array()) fail("bodies", "expected a list");
  std::vector<Body> bodies;
  for (std::size_t i = 0; i < bodies_json.size(); ++i) {
    bodies.push_back(parse_body(bodies_json[i], "bodies[" + std::to_string(i) + "]"));
  }
  const std::string name = doc.contains("name") ? text(doc["name"], "name") : std::string();
  const std::string description = doc.contains("description") ? text(doc["description"], "description") : "";
  try {
    return make_scene(std::move(bodies), source, name, description);
  } catch (const std::invalid_argument& e) {
    throw SceneError(e.what());
  }
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open scene file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scene(buffer.str());
  } catch (const SceneError& e) {
    throw SceneError(path + ": " + e.what(), e.line(), e.column());
  }
}

nlohmann::ordered_json scene_to_json(const Scene& scene) {
  nlohmann::ordered_json out;
  out["name"] = scene.name;
  out["description"] = scene.description;
  out["source"] = {scene.source.x(), scene.source.y()};
  out["bodies"] = nlohmann::ordered_json::array();
  for (const Body& body : scene.bodies) {
    nlohmann::ordered_json b;
    b["kind"] = shape_kind(body.shape);
    b["params"] = shape_params_json(body.shape.params);
    b["center"] = {body.shape.center.x(), body.shape.center.y()};
    b["rotation"] = body.shape.rotation;
    b["bc"] = body.bc == BoundaryCondition::kDirichlet ? "dirichlet" : "neumann";
    b["label"] = body.label;
    b["resolution"] = body.resolution;
    out["bodies"].push_back(std::move(b));
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string scene_hash(const Scene& scene) {
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(fnv1a64(scene_to_json(scene).dump())));
  return buffer;
}

}  // namespace passage
