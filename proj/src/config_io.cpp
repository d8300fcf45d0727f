#include "minsurf/config_io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "json.hpp"

namespace minsurf {

using nlohmann::json;

namespace {

std::string line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return std::to_string(line);
}

double real_field(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigParseError(where + ": expected a number");
  return v.get<double>();
}

}  // namespace

Configuration parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigParseError("line " + line_of(text, e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigParseError("top level: expected a JSON object");
  if (!doc.contains("alphas")) throw ConfigParseError("alphas: missing field");
  if (!doc.contains("points")) throw ConfigParseError("points: missing field");
  const json& alphas = doc["alphas"];
  const json& points = doc["points"];
  if (!alphas.is_array()) throw ConfigParseError("alphas: expected an array");
  if (!points.is_array()) throw ConfigParseError("points: expected an array");
  if (alphas.size() != points.size())
    throw ConfigParseError("alphas/points: lengths differ (" + std::to_string(alphas.size()) + " vs " +
                           std::to_string(points.size()) + ")");

  Configuration c;
  for (std::size_t k = 0; k < alphas.size(); ++k)
    c.necksizes.push_back(real_field(alphas[k], "alphas[" + std::to_string(k) + "]"));
  for (std::size_t k = 0; k < points.size(); ++k) {
    const json& p = points[k];
    const std::string where = "points[" + std::to_string(k) + "]";
    if (!p.is_array() || p.size() != 2) throw ConfigParseError(where + ": expected a [re, im] pair");
    c.points.emplace_back(real_field(p[0], where + "[0]"), real_field(p[1], where + "[1]"));
  }
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw ConfigParseError("label: expected a string");
    c.label = doc["label"].get<std::string>();
  }
  try {
    c.check_structure();
  } catch (const ConfigurationError& e) {
    throw ConfigParseError(e.what());
  }
  return c;
}

std::string config_to_json(const Configuration& c) {
  json doc = json::object();
  if (!c.label.empty()) doc["label"] = c.label;
  doc["alphas"] = c.necksizes;
  json pts = json::array();
  for (const cplx p : c.points) pts.push_back({p.real(), p.imag()});
  doc["points"] = pts;
  return doc.dump(2) + "\n";
}

Configuration read_config(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigParseError(path + ": cannot open");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return parse_config(text);
}

void write_config(const std::string& path, const Configuration& c) {
  std::ofstream out(path, std::ios::binary);
  out << config_to_json(c);
  if (!out) throw std::ios_base::failure(path + ": write failed");
}

}  // namespace minsurf
