#include "kcas/scene_io.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <map>
#include "json.hpp"
#include <set>
#include <sstream>

namespace kcas {
namespace {

using json = nlohmann::json;

// Line of the first character of every value, keyed by JSON pointer. The
// text is already known to be valid JSON when this runs.
class LineIndex {
 public:
  explicit LineIndex(const std::string& text) : text_(text) {
    skip_ws();
    value("");
  }
  int line(const std::string& pointer) const {
    auto it = lines_.find(pointer);
    return it == lines_.end() ? 0 : it->second;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }
  std::string string_token() {
    std::string out;
    ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      if (pos_ < text_.size()) out += text_[pos_++];
    }
    ++pos_;
    return out;
  }
  void value(const std::string& ptr) {
    lines_[ptr] = line_;
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = string_token();
        skip_ws();
        ++pos_;  // ':'
        skip_ws();
        value(ptr + "/" + key);
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      for (int i = 0; pos_ < text_.size() && text_[pos_] != ']'; ++i) {
        value(ptr + "/" + std::to_string(i));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && !std::strchr(",]} \t\r\n", text_[pos_])) ++pos_;
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::map<std::string, int> lines_;
};

class Reader {
 public:
  Reader(const LineIndex& index, std::string origin) : index_(index), origin_(std::move(origin)) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    const int line = index_.line(ptr);
    std::ostringstream os;
    os << origin_;
    if (line > 0) os << ":" << line;
    os << ": " << msg << " (at " << (ptr.empty() ? "/" : ptr) << ")";
    throw SceneParseError(os.str(), line);
  }

  void keys(const json& obj, const std::string& ptr, const std::set<std::string>& allowed,
            const std::set<std::string>& required) const {
    if (!obj.is_object()) fail(ptr, "expected an object");
    for (const auto& [k, v] : obj.items())
      if (!allowed.count(k)) fail(ptr + "/" + k, "unknown key '" + k + "'");
    for (const std::string& k : required)
      if (!obj.contains(k)) fail(ptr, "missing key '" + k + "'");
  }

  double number(const json& obj, const std::string& ptr, const std::string& key) const {
    const json& v = obj.at(key);
    if (!v.is_number()) fail(ptr + "/" + key, "'" + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(ptr + "/" + key, "'" + key + "' must be finite");
    return d;
  }

  int integer(const json& obj, const std::string& ptr, const std::string& key) const {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(ptr + "/" + key, "'" + key + "' must be an integer");
    return v.get<int>();
  }

  std::vector<double> numbers(const json& obj, const std::string& ptr, const std::string& key) const {
    const json& v = obj.at(key);
    if (!v.is_array()) fail(ptr + "/" + key, "'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(ptr + "/" + key + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

 private:
  const LineIndex& index_;
  std::string origin_;
};

Curve read_obstacle(const Reader& rd, const json& o, const std::string& ptr, int& n_out) {
  if (!o.is_object() || !o.contains("kind") || !o["kind"].is_string()) rd.fail(ptr, "obstacle needs a string 'kind'");
  const std::string kind = o["kind"];
  const std::set<std::string> common = {"kind", "center", "rotation", "n"};
  auto with = [&](std::set<std::string> extra) {
    extra.insert(common.begin(), common.end());
    return extra;
  };
  std::set<std::string> shape;
  if (kind == "circle") shape = {"radius"};
  else if (kind == "ellipse") shape = {"a", "b"};
  else if (kind == "kite") shape = {"scale"};
  else if (kind == "polar_fourier") shape = {"coefficients"};
  else rd.fail(ptr + "/kind", "unknown obstacle kind '" + kind + "'");
  std::set<std::string> required = shape;
  required.insert("center");
  rd.keys(o, ptr, with(shape), required);

  const std::vector<double> c = rd.numbers(o, ptr, "center");
  if (c.size() != 2) rd.fail(ptr + "/center", "center must have two components");
  const Vec2 center(c[0], c[1]);
  const double rot = o.contains("rotation") ? rd.number(o, ptr, "rotation") : 0.0;
  if (o.contains("n")) n_out = rd.integer(o, ptr, "n");
  try {
    if (kind == "circle") {
      if (rot != 0.0) rd.fail(ptr + "/rotation", "circles take no rotation");
      return make_circle(center, rd.number(o, ptr, "radius"));
    }
    if (kind == "ellipse") return make_ellipse(center, rd.number(o, ptr, "a"), rd.number(o, ptr, "b"), rot);
    if (kind == "kite") return make_kite(center, rd.number(o, ptr, "scale"), rot);
    return make_polar_fourier(center, rd.numbers(o, ptr, "coefficients"), rot);
  } catch (const SceneError& e) {
    rd.fail(ptr, e.what());
  }
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

SceneFile parse_scene(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
      if (text[i] == '\n') ++line;
    // e.byte points one past the offending character.
    if (e.byte > 0 && e.byte <= text.size() && text[e.byte - 1] == '\n') --line;
    throw SceneParseError(origin + ":" + std::to_string(line) + ": invalid JSON: " + e.what(), line);
  }
  const LineIndex index(text);
  const Reader rd(index, origin);
  rd.keys(doc, "", {"version", "dimension", "n", "description", "obstacles"}, {"version", "dimension", "obstacles"});
  if (rd.integer(doc, "", "version") != 1) rd.fail("/version", "unsupported version (expected 1)");
  if (rd.integer(doc, "", "dimension") != 2) rd.fail("/dimension", "only dimension 2 is supported");
  SceneFile out{Scene({make_circle({0, 0}, 1)}), 128, {}, ""};
  if (doc.contains("n")) out.n = rd.integer(doc, "", "n");
  if (doc.contains("description")) {
    if (!doc["description"].is_string()) rd.fail("/description", "'description' must be a string");
    out.description = doc["description"];
  }
  const json& obs = doc["obstacles"];
  if (!obs.is_array() || obs.empty()) rd.fail("/obstacles", "'obstacles' must be a non-empty array");
  std::vector<Curve> curves;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    int n = out.n;
    curves.push_back(read_obstacle(rd, obs[i], "/obstacles/" + std::to_string(i), n));
    if (n < kMinNodesPerObstacle || n % 2 != 0)
      rd.fail("/obstacles/" + std::to_string(i), "node count must be even and at least " +
                                                      std::to_string(kMinNodesPerObstacle));
    out.counts.push_back(n);
  }
  try {
    out.scene = Scene(std::move(curves));
  } catch (const SceneError& e) {
    rd.fail("/obstacles", e.what());
  }
  return out;
}

SceneFile load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SceneParseError("cannot open scene file " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str(), path);
}

std::string scene_to_json(const SceneFile& file) {
  std::ostringstream os;
  os << "{\n  \"version\": 1,\n  \"dimension\": 2,\n  \"n\": " << file.n << ",\n";
  if (!file.description.empty()) os << "  \"description\": " << json(file.description).dump() << ",\n";
  os << "  \"obstacles\": [\n";
  for (int j = 0; j < file.scene.size(); ++j) {
    const Curve& c = file.scene.obstacle(j);
    const auto& p = c.params();
    os << "    {\"kind\": \"" << to_string(c.kind()) << "\", \"center\": [" << format_number(c.center().x()) << ", "
       << format_number(c.center().y()) << "]";
    switch (c.kind()) {
      case CurveKind::circle: os << ", \"radius\": " << format_number(p[0]); break;
      case CurveKind::ellipse: os << ", \"a\": " << format_number(p[0]) << ", \"b\": " << format_number(p[1]); break;
      case CurveKind::kite: os << ", \"scale\": " << format_number(p[0]); break;
      case CurveKind::polar_fourier: {
        os << ", \"coefficients\": [";
        for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << format_number(p[i]);
        os << "]";
        break;
      }
    }
    if (c.kind() != CurveKind::circle && c.rotation() != 0.0) os << ", \"rotation\": " << format_number(c.rotation());
    if (j < static_cast<int>(file.counts.size()) && file.counts[j] != file.n) os << ", \"n\": " << file.counts[j];
    os << "}" << (j + 1 < file.scene.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

}  // namespace kcas
