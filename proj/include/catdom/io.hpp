#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "catdom/cone.hpp"
#include "catdom/errors.hpp"
#include "catdom/measure.hpp"

// Measure files:
//   {"dim": d, "atoms": [{"x": ["2/5", "3/5"], "w": "1/10"}, ...]}
// Cone files:
//   {"dim": d, "kind": "halfline" | "orthant" | "generators",
//    "rays": [[...], ...], "normals": [[...], ...], "unit": [...]}
// Numbers are fraction strings ("3/4"), decimal strings ("0.75", read
// exactly) or JSON integers.

namespace catdom::io {

using nlohmann::json;

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending character.
    auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ParseError(msg, line, col);
  }
}

inline Rational number(const json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const InvalidArgument& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(Integer(j.dump(), 10));
  if (j.is_number_float())
    throw ParseError(where + ": non-integer numbers must be written as strings, e.g. \"0.1\"");
  throw ParseError(where + ": expected a number");
}

inline Point point(const json& j, std::size_t dim, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of coordinates");
  if (j.size() != dim)
    throw ParseError(where + ": expected " + std::to_string(dim) + " coordinates, got " +
                     std::to_string(j.size()));
  Point p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = number(j[i], where + "[" + std::to_string(i) + "]");
  return p;
}

inline std::size_t dimension(const json& root) {
  if (!root.is_object()) throw ParseError("top level must be an object");
  if (!root.contains("dim") || !root["dim"].is_number_unsigned() || root["dim"].get<std::size_t>() == 0)
    throw ParseError("\"dim\" must be a positive integer");
  return root["dim"].get<std::size_t>();
}

inline std::vector<Point> point_list(const json& root, const char* key, std::size_t dim) {
  std::vector<Point> out;
  if (!root.contains(key)) return out;
  const json& arr = root[key];
  if (!arr.is_array()) throw ParseError(std::string("\"") + key + "\" must be an array");
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(point(arr[i], dim, std::string(key) + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::string quoted(const Rational& q) { return "\"" + to_string(q) + "\""; }

inline std::string point_text(const Point& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) s += ", ";
    s += quoted(p[i]);
  }
  return s + "]";
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

/// Parses a measure file. With `normalize`, weights are divided by the total mass.
inline Measure parse_measure(const std::string& text, bool normalize = false) {
  json root = detail::parse_json(text);
  std::size_t dim = detail::dimension(root);
  if (!root.contains("atoms") || !root["atoms"].is_array())
    throw ParseError("\"atoms\" must be an array");
  Measure mu(dim);
  const json& atoms = root["atoms"];
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::string where = "atoms[" + std::to_string(i) + "]";
    const json& a = atoms[i];
    if (!a.is_object() || !a.contains("x") || !a.contains("w"))
      throw ParseError(where + ": expected an object with \"x\" and \"w\"");
    Rational w = detail::number(a["w"], where + ".w");
    if (sgn(w) < 0) throw ParseError(where + ".w: weight must be nonnegative");
    mu.add(detail::point(a["x"], dim, where + ".x"), w);
  }
  if (normalize) {
    Rational m = mu.mass();
    if (sgn(m) == 0) throw ParseError("cannot normalize a zero measure");
    Measure out(dim);
    for (const auto& [x, w] : mu.atoms()) out.add(x, w / m);
    return out;
  }
  return mu;
}

/// Canonical text: atoms in lexicographic order, lowest-terms fractions,
/// one atom per line.
inline std::string serialize_measure(const Measure& mu) {
  std::string s = "{\n  \"dim\": " + std::to_string(mu.dim()) + ",\n  \"atoms\": [";
  bool first = true;
  for (const auto& [x, w] : mu.atoms()) {
    s += first ? "\n" : ",\n";
    first = false;
    s += "    {\"x\": " + detail::point_text(x) + ", \"w\": " + detail::quoted(w) + "}";
  }
  s += first ? "]\n}\n" : "\n  ]\n}\n";
  return s;
}

inline Cone parse_cone(const std::string& text) {
  json root = detail::parse_json(text);
  std::size_t dim = detail::dimension(root);
  std::string kind = root.value("kind", std::string("generators"));
  auto rays = detail::point_list(root, "rays", dim);
  auto normals = detail::point_list(root, "normals", dim);
  Point unit(dim);
  bool has_unit = root.contains("unit");
  if (has_unit) unit = detail::point(root["unit"], dim, "unit");

  try {
    if (kind == "halfline") {
      if (dim != 1) throw ParseError("kind \"halfline\" requires dim 1");
      if (has_unit) return Cone(1, {Point{Rational(1)}}, {Point{Rational(1)}}, unit);
      return Cone::halfline();
    }
    if (kind == "orthant") return has_unit ? Cone::orthant(dim, unit) : Cone::orthant(dim);
    if (kind != "generators") throw ParseError("unknown cone kind \"" + kind + "\"");
    if (!has_unit) throw ParseError("kind \"generators\" requires \"unit\"");
    if (!rays.empty() && !normals.empty()) return Cone(dim, rays, normals, unit);
    if (dim > 3) throw ParseError("cones of dimension > 3 need both \"rays\" and \"normals\"");
    if (!rays.empty()) return Cone::from_rays(rays, unit);
    if (!normals.empty()) return Cone::from_normals(normals, unit);
    throw ParseError("kind \"generators\" requires \"rays\" or \"normals\"");
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid cone: ") + e.what());
  }
}

inline std::string serialize_cone(const Cone& cone) {
  auto list = [](const std::vector<Point>& pts) {
    std::string s = "[";
    for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? ", " : "") + detail::point_text(pts[i]);
    return s + "]";
  };
  return "{\n  \"dim\": " + std::to_string(cone.dim()) + ",\n  \"kind\": \"generators\",\n" +
         "  \"rays\": " + list(cone.rays()) + ",\n  \"normals\": " + list(cone.normals()) +
         ",\n  \"unit\": " + detail::point_text(cone.unit()) + "\n}\n";
}

/// "halfline", "orthant", or a path to a cone file.
inline Cone resolve_cone(const std::string& spec, std::size_t dim) {
  if (spec.empty()) return dim == 1 ? Cone::halfline() : Cone::orthant(dim);
  if (spec == "halfline") {
    if (dim != 1) throw InvalidArgument("--cone halfline needs 1-dimensional measures");
    return Cone::halfline();
  }
  if (spec == "orthant") return Cone::orthant(dim);
  Cone cone = parse_cone(read_file(spec));
  if (cone.dim() != dim) throw DimensionMismatch(dim, cone.dim());
  return cone;
}

/// "3/4" or "1/2,3/4" into a point of the given dimension.
inline Point parse_point_arg(const std::string& text, std::size_t dim) {
  std::vector<Rational> coords;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) coords.push_back(parse_rational(item));
  if (coords.size() != dim) throw DimensionMismatch(dim, coords.size());
  return Point(coords);
}

}  // namespace catdom::io
