#include "weaklie/definition.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "weaklie/parse.hpp"

namespace weaklie {
namespace {

using json = nlohmann::ordered_json;

std::string rational_text(double v) {
  for (std::int64_t d = 1; d <= 10000; ++d) {
    double n = std::round(v * static_cast<double>(d));
    if (std::fabs(n / static_cast<double>(d) - v) < 1e-12) return Rational(static_cast<std::int64_t>(n), d).to_string();
  }
  throw DefinitionError("sampling bound " + std::to_string(v) + " has no small rational form");
}

double bound(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.get<double>();
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>()).to_double();
    } catch (const Error& e) {
      throw DefinitionError(where + ": " + e.what());
    }
  }
  throw DefinitionError(where + ": bounds must be integers or \"p/q\" strings");
}

Interval interval(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw DefinitionError(where + ": expected [lo, hi]");
  return {bound(j[0], where), bound(j[1], where)};
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw DefinitionError(where + ": missing key '" + key + "'");
  return j.at(key);
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw DefinitionError(where + ": expected an expression string");
  return j.get<std::string>();
}

Expr expression(const json& j, const Definition& d, const std::string& where) {
  try {
    return parse_expression(text(j, where), d.chart, d.registry);
  } catch (const SyntaxError& e) {
    throw SyntaxError(e.position(), e.expected(), where);
  }
}

std::vector<Expr> components(const json& j, const Definition& d, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != d.chart.dim())
    throw DefinitionError(where + ": expected " + std::to_string(d.chart.dim()) + " components");
  std::vector<Expr> out;
  for (std::size_t a = 0; a < j.size(); ++a) out.push_back(expression(j[a], d, where + "[" + std::to_string(a) + "]"));
  return out;
}

TensorField read_metric(const json& j, const Definition& d) {
  const int n = d.chart.dim();
  if (!j.is_array() || static_cast<int>(j.size()) != n) throw DefinitionError("metric: expected " + std::to_string(n) + " rows");
  std::vector<std::vector<std::optional<Expr>>> m(static_cast<std::size_t>(n),
                                                 std::vector<std::optional<Expr>>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array()) throw DefinitionError("metric[" + std::to_string(i) + "]: expected an array");
    // A row is either full (n entries, null below the diagonal allowed) or
    // the upper triangle from the diagonal on (n - i entries).
    const int len = static_cast<int>(row.size());
    int first;
    if (len == n)
      first = 0;
    else if (len == n - i)
      first = i;
    else
      throw DefinitionError("metric[" + std::to_string(i) + "]: expected " + std::to_string(n) + " or " +
                            std::to_string(n - i) + " entries");
    for (int k = 0; k < len; ++k) {
      const json& e = row[static_cast<std::size_t>(k)];
      int col = first + k;
      if (e.is_null()) {
        if (col >= i) throw DefinitionError("metric[" + std::to_string(i) + "][" + std::to_string(col) + "]: required");
        continue;
      }
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] =
          expression(e, d, "metric[" + std::to_string(i) + "][" + std::to_string(col) + "]");
    }
  }
  TensorField g(n, 0, 2);
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) {
      const auto& up = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      const auto& lo = m[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
      if (up && lo && !(*up == *lo))
        throw DefinitionError("metric: entries (" + std::to_string(i) + "," + std::to_string(k) + ") and (" +
                              std::to_string(k) + "," + std::to_string(i) + ") differ");
      g(i, k) = g(k, i) = *up;
    }
  return g;
}

}  // namespace

Definition parse_definition(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DefinitionError(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw DefinitionError("definition must be a JSON object");
  Definition d;

  const json& manifold = require(root, "manifold", "definition");
  const json& coords = require(manifold, "coordinates", "manifold");
  if (!coords.is_array()) throw DefinitionError("manifold.coordinates: expected an array");
  std::vector<std::string> names;
  for (const auto& c : coords) names.push_back(text(c, "manifold.coordinates"));
  if (manifold.contains("dim") && manifold.at("dim") != json(names.size()))
    throw DefinitionError("manifold.dim does not match the number of coordinates");
  d.chart = Chart(names);
  if (manifold.contains("intervals")) {
    for (const auto& [name, box] : manifold.at("intervals").items()) {
      auto idx = d.chart.index_of(name);
      if (!idx) throw DefinitionError("manifold.intervals: unknown coordinate '" + name + "'");
      d.chart.set_interval(*idx, interval(box, "manifold.intervals." + name));
    }
  }

  if (root.contains("parameters")) {
    for (const auto& p : root.at("parameters")) d.registry.add_parameter(text(p, "parameters"));
  }
  if (root.contains("parameter_intervals")) {
    for (const auto& [name, box] : root.at("parameter_intervals").items()) {
      if (!d.registry.has_parameter(name)) throw DefinitionError("parameter_intervals: unknown parameter '" + name + "'");
      d.chart.set_parameter_interval(name, interval(box, "parameter_intervals." + name));
    }
  }
  if (root.contains("opaque_functions")) {
    for (const auto& f : root.at("opaque_functions")) {
      std::string name = text(require(f, "name", "opaque_functions"), "opaque_functions.name");
      std::vector<std::string> args;
      int arity = 0;
      if (f.contains("arguments")) {
        for (const auto& a : f.at("arguments")) {
          std::string c = text(a, "opaque_functions." + name + ".arguments");
          if (!d.chart.index_of(c)) throw DefinitionError("opaque function '" + name + "': unknown coordinate '" + c + "'");
          args.push_back(c);
        }
        arity = static_cast<int>(args.size());
      } else if (f.contains("arity") && f.at("arity").is_number_integer()) {
        arity = f.at("arity").get<int>();
      } else {
        throw DefinitionError("opaque function '" + name + "': needs 'arguments' or 'arity'");
      }
      d.registry.add_opaque(name, arity);
      d.opaque_arguments[name] = args;
    }
  }

  if (root.contains("metric")) d.metric = read_metric(root.at("metric"), d);

  if (root.contains("vectors")) {
    const json& v = root.at("vectors");
    if (!v.is_object()) throw DefinitionError("vectors: expected an object of name -> components");
    for (const auto& [name, comps] : v.items())
      d.frame.add(name, VectorField(components(comps, d, "vectors." + name)));
  }
  if (root.contains("scalars")) {
    for (const auto& [name, e] : root.at("scalars").items()) d.scalars.emplace_back(name, expression(e, d, "scalars." + name));
  }
  if (root.contains("structure_coordinates")) {
    for (const auto& c : root.at("structure_coordinates")) {
      auto idx = d.chart.index_of(text(c, "structure_coordinates"));
      if (!idx) throw DefinitionError("structure_coordinates: unknown coordinate");
      d.structure_coordinates.insert(*idx);
    }
  }
  if (root.contains("analysis")) {
    const json& a = root.at("analysis");
    if (a.contains("commands"))
      for (const auto& c : a.at("commands")) d.analysis.commands.push_back(text(c, "analysis.commands"));
    if (a.contains("mode")) {
      d.analysis.mode = text(a.at("mode"), "analysis.mode");
      if (d.analysis.mode != "def2" && d.analysis.mode != "def3")
        throw DefinitionError("analysis.mode must be def2 or def3");
    }
    d.analysis.collineations = a.value("collineations", false);
    d.analysis.integrability = a.value("integrability", false);
  }
  return d;
}

Definition load_definition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DefinitionError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_definition(ss.str());
}

Definition to_definition(const ExampleSpec& spec) {
  Definition d;
  d.chart = spec.chart;
  d.registry = spec.registry;
  d.opaque_arguments = spec.opaque_arguments;
  if (spec.metric)
    d.metric = spec.metric->tensor();
  else if (spec.form)
    d.metric = *spec.form;
  d.frame = spec.frame;
  for (const auto& [k, v] : spec.scalars) d.scalars.emplace_back(k, v);
  d.structure_coordinates = spec.structure_coordinates;
  return d;
}

std::string emit_definition(const Definition& d) {
  const auto& names = d.chart.names();
  json root;
  json manifold;
  manifold["dim"] = d.chart.dim();
  manifold["coordinates"] = names;
  json intervals = json::object();
  for (int i = 0; i < d.chart.dim(); ++i) {
    Interval box = d.chart.interval(i);
    Interval def;
    if (box.lo != def.lo || box.hi != def.hi) intervals[names[i]] = {rational_text(box.lo), rational_text(box.hi)};
  }
  if (!intervals.empty()) manifold["intervals"] = intervals;
  root["manifold"] = manifold;
  root["parameters"] = json::array();
  for (const auto& p : d.registry.parameters()) root["parameters"].push_back(p);
  if (!d.chart.parameter_intervals().empty()) {
    json pi = json::object();
    for (const auto& [name, box] : d.chart.parameter_intervals()) pi[name] = {rational_text(box.lo), rational_text(box.hi)};
    root["parameter_intervals"] = pi;
  }
  root["opaque_functions"] = json::array();
  for (const auto& [name, arity] : d.registry.opaques()) {
    json f;
    f["name"] = name;
    auto it = d.opaque_arguments.find(name);
    if (it != d.opaque_arguments.end() && !it->second.empty())
      f["arguments"] = it->second;
    else
      f["arity"] = arity;
    root["opaque_functions"].push_back(f);
  }
  if (d.metric) {
    json m = json::array();
    for (int i = 0; i < d.chart.dim(); ++i) {
      json row = json::array();
      for (int k = i; k < d.chart.dim(); ++k) row.push_back(to_string((*d.metric)(i, k), names));
      m.push_back(row);
    }
    root["metric"] = m;
  }
  json vectors = json::object();
  for (int i = 0; i < d.frame.size(); ++i) {
    json comps = json::array();
    for (const auto& c : d.frame[i].components()) comps.push_back(to_string(c, names));
    vectors[d.frame.names[static_cast<std::size_t>(i)]] = comps;
  }
  root["vectors"] = vectors;
  if (!d.scalars.empty()) {
    json s = json::object();
    for (const auto& [k, v] : d.scalars) s[k] = to_string(v, names);
    root["scalars"] = s;
  }
  if (!d.structure_coordinates.empty()) {
    json sc = json::array();
    for (int c : d.structure_coordinates) sc.push_back(names[static_cast<std::size_t>(c)]);
    root["structure_coordinates"] = sc;
  }
  json a;
  a["commands"] = d.analysis.commands;
  a["mode"] = d.analysis.mode;
  a["collineations"] = d.analysis.collineations;
  a["integrability"] = d.analysis.integrability;
  root["analysis"] = a;
  return root.dump(2) + "\n";
}

std::string emit_definition(const ExampleSpec& spec) { return emit_definition(to_definition(spec)); }

}  // namespace weaklie
