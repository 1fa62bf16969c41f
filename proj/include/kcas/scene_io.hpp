#pragma once

// Scene files: JSON with a version field, strict keys.
//
// {
//   "version": 1,
//   "dimension": 2,
//   "n": 128,
//   "description": "optional text",
//   "obstacles": [
//     {"kind": "circle", "center": [0, 0], "radius": 1},
//     {"kind": "ellipse", "center": [4, 0], "a": 1.5, "b": 0.7, "rotation": 0.3, "n": 192},
//     {"kind": "kite", "center": [0, 5], "scale": 1},
//     {"kind": "polar_fourier", "center": [6, 6], "coefficients": [1, 0.1, 0, 0, 0.05]}
//   ]
// }

#include <stdexcept>
#include <string>
#include <vector>

#include "kcas/geometry.hpp"

namespace kcas {

class SceneParseError : public std::runtime_error {
 public:
  SceneParseError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }  // 0 when unknown

 private:
  int line_;
};

struct SceneFile {
  Scene scene;
  int n = 128;
  std::vector<int> counts;  // per obstacle, defaults to n
  std::string description;
};

SceneFile parse_scene(const std::string& text, const std::string& origin = "<input>");
SceneFile load_scene(const std::string& path);
std::string scene_to_json(const SceneFile& file);

}  // namespace kcas
