#include "ancap/geometry_io.hpp"

#include <fstream>
#include <sstream>

#include "ancap/error.hpp"
#include "json.hpp"

namespace ancap {

namespace {

using nlohmann::json;

cplx point(const json& j, const char* field) {
  if (!j.contains(field)) throw Error(ErrorKind::io_error, std::string("missing field '") + field + "'");
  const json& p = j.at(field);
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
    throw Error(ErrorKind::io_error, std::string("field '") + field + "' must be [x, y]");
  return {p[0].get<double>(), p[1].get<double>()};
}

double number(const json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_number())
    throw Error(ErrorKind::io_error, std::string("missing numeric field '") + field + "'");
  return j.at(field).get<double>();
}

}  // namespace

CompactSetSpec parse_geometry(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::io_error, std::string("malformed geometry JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("components") || !doc["components"].is_array())
    throw Error(ErrorKind::io_error, "geometry JSON needs a 'components' array");

  std::vector<BoundaryCurve> curves;
  std::vector<Slit> slits;
  std::vector<std::string> labels;
  bool any_label = false;
  for (const json& c : doc["components"]) {
    if (!c.is_object() || !c.contains("type") || !c["type"].is_string())
      throw Error(ErrorKind::io_error, "each component needs a string 'type'");
    const std::string type = c["type"].get<std::string>();
    if (type == "circle") {
      curves.push_back(BoundaryCurve::circle(point(c, "center"), number(c, "radius")));
    } else if (type == "ellipse") {
      curves.push_back(BoundaryCurve::ellipse(point(c, "center"), number(c, "major"),
                                              c.value("angle", 0.0), c.value("ratio", 1.0)));
    } else if (type == "polygon") {
      if (!c.contains("vertices") || !c["vertices"].is_array())
        throw Error(ErrorKind::io_error, "polygon needs a 'vertices' array");
      std::vector<cplx> v;
      for (const json& p : c["vertices"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
          throw Error(ErrorKind::io_error, "polygon vertex must be [x, y]");
        v.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      curves.push_back(BoundaryCurve::polygon(std::move(v)));
    } else if (type == "slit") {
      slits.push_back(slit_from_endpoints(point(c, "a"), point(c, "b")));
    } else {
      throw Error(ErrorKind::io_error, "unknown component type '" + type + "'");
    }
    if (c.contains("label")) {
      if (!c["label"].is_string()) throw Error(ErrorKind::io_error, "'label' must be a string");
      labels.push_back(c["label"].get<std::string>());
      any_label = true;
    } else {
      labels.emplace_back();
    }
  }
  if (!curves.empty() && !slits.empty())
    throw Error(ErrorKind::invalid_geometry, "slits and Jordan curves cannot be mixed");
  if (curves.empty() && slits.empty()) throw Error(ErrorKind::invalid_geometry, "geometry has no components");
  if (!any_label) labels.clear();
  if (!slits.empty()) return CompactSetSpec::slit_set(SlitSet(std::move(slits)), std::move(labels));
  return CompactSetSpec::jordan(std::move(curves), std::move(labels));
}

CompactSetSpec load_geometry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io_error, "cannot open geometry file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_geometry(os.str());
}

}  // namespace ancap
