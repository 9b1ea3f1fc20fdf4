#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "weaklie/acceptance.hpp"
#include "weaklie/algebroid.hpp"
#include "weaklie/catalog.hpp"
#include "weaklie/definition.hpp"
#include "weaklie/geometry.hpp"
#include "weaklie/report.hpp"
#include "weaklie/symmetry.hpp"

using namespace weaklie;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kCompleted = 0, kFailed = 1, kInputError = 2, kConvention = 3 };

struct Options {
  NumericContext ctx;
  bool json_output = false;
  std::string file;
  std::string mode;
  bool collineations = false;
  bool integrability = false;
  std::string vector;
  std::string name;
  std::vector<std::string> params;
  std::string only;
};

json zero_json(const ZeroCheck& z) { return {{"zero", z.all_zero}, {"residual_max", z.max_residual}}; }

json rank_json(const RankSignature& r) {
  return {{"rank", r.rank}, {"signature", {r.plus, r.minus, r.zero}}};
}

json form_json(const AlgebraForm& f, const Chart& chart) {
  json out = json::array();
  for (const auto& row : f) {
    json r = json::array();
    for (const auto& e : row) r.push_back(to_string(e, chart.names()));
    out.push_back(r);
  }
  return out;
}

json matrix_json(const std::vector<std::vector<bool>>& z) {
  json out = json::array();
  for (const auto& row : z) out.push_back(row);
  return out;
}

json complete_set_json(const CompleteSetReport& r) {
  json residuals = json::array();
  for (const auto& row : r.residual) residuals.push_back(row);
  return {{"mode", r.mode == CompleteSetMode::def2 ? "def2" : "def3"},
          {"generators", r.names},
          {"second_derivative_zero", matrix_json(r.zero)},
          {"second_derivative_residual", residuals},
          {"first_derivative_zero", r.single_zero},
          {"def2_upper", r.def2_upper},
          {"def2_lower", r.def2_lower},
          {"def2", r.def2_pass},
          {"def3", r.def3_pass},
          {"pass", r.pass()}};
}

CompleteSetMode parse_mode(const std::string& m) { return m == "def2" ? CompleteSetMode::def2 : CompleteSetMode::def3; }

CommandResult cmd_check(const Options& o) {
  Definition d = load_definition(o.file);
  CommandResult c;
  c.name = "check";
  const std::string mode_name = o.mode.empty() ? d.analysis.mode : o.mode;
  c.inputs = {{"file", o.file}, {"mode", mode_name}};
  const bool coll = o.collineations || d.analysis.collineations;
  const bool integ = o.integrability || d.analysis.integrability;
  CompleteSetMode mode = parse_mode(mode_name);

  if (d.metric) {
    RankSignature rs = rank_and_signature(*d.metric, d.chart, o.ctx);
    bool nondegenerate = rs.rank == d.chart.dim();
    c.findings["metric"] = rank_json(rs);
    json gens = json::array();
    if (nondegenerate) {
      MetricField g(*d.metric);
      for (int i = 0; i < d.frame.size(); ++i) {
        const std::string& name = d.frame.names[static_cast<std::size_t>(i)];
        GeneratorReport r = classify_generator(g, d.frame[i], d.chart, o.ctx, name);
        json gj = {{"name", name},
                   {"motion", r.is_motion},
                   {"conformal", r.is_conformal},
                   {"homothetic", r.is_homothetic},
                   {"weak_motion", r.is_weak_motion},
                   {"genuine_weak", r.is_genuine_weak},
                   {"super_weak", r.is_super_weak},
                   {"drag", zero_json(r.drag_check)},
                   {"drag_rank", rank_json(r.drag_rank)},
                   {"drag2", zero_json(r.drag2_check)},
                   {"inverse_drag2", zero_json(r.inverse_drag2_check)}};
        if (r.is_conformal) {
          gj["lambda"] = to_string(r.lambda, d.chart.names());
          gj["conformal_residual"] = zero_json(r.conformal_check);
          gj["isomet4"] = zero_json(r.isomet4_check);
        }
        if (r.null_decomposition) {
          gj["phi"] = to_string(r.phi, d.chart.names());
          json k = json::array();
          for (const auto& e : r.k) k.push_back(to_string(e, d.chart.names()));
          gj["k"] = k;
        }
        c.residual_max = std::max({c.residual_max, r.drag_check.all_zero ? r.drag_check.max_residual : 0.0,
                                   r.drag2_check.all_zero ? r.drag2_check.max_residual : 0.0});
        if (coll) {
          CollineationReport cr = collineation_analysis(g, d.frame[i], d.chart, o.ctx);
          gj["collineations"] = {{"affine", zero_json(cr.affine_check)},
                                 {"curvature", zero_json(cr.curvature_check)},
                                 {"ricci", zero_json(cr.ricci_check)},
                                 {"weak_affine", zero_json(cr.weak_affine_check)},
                                 {"weak_curvature", zero_json(cr.weak_curvature_check)},
                                 {"weak_ricci", zero_json(cr.weak_ricci_check)},
                                 {"riemannian_weak_affine_printed", zero_json(cr.riemcollin_printed)},
                                 {"riemannian_weak_affine_exchanged", zero_json(cr.riemcollin_exchanged)}};
          if (cr.flat) {
            gj["collineations"]["flat_condition"] = zero_json(cr.flat_condition_check);
            gj["collineations"]["flat_agreement"] = zero_json(cr.flat_agreement);
          }
        }
        if (integ) {
          IntegrabilityReport ir = integrability_residuals(g, d.frame[i], d.chart, o.ctx);
          gj["integrability"] = {{"cond1_printed", zero_json(ir.cond1_check)},
                                 {"cond1_corrected", zero_json(ir.cond1_corrected_check)},
                                 {"cond2", zero_json(ir.cond2_check)}};
          if (ir.flat) gj["integrability"]["cond1a"] = zero_json(ir.cond1a_check);
        }
        gens.push_back(gj);
      }
    } else {
      c.findings["degenerate"] = true;
      for (int i = 0; i < d.frame.size(); ++i) {
        TensorField g1 = lie_derivative(d.frame[i], *d.metric);
        TensorField g2 = lie_derivative(d.frame[i], g1);
        ZeroCheck z1 = zero_test(g1, d.chart, o.ctx);
        ZeroCheck z2 = zero_test(g2, d.chart, o.ctx);
        gens.push_back({{"name", d.frame.names[static_cast<std::size_t>(i)]},
                        {"drag", zero_json(z1)},
                        {"drag2", zero_json(z2)}});
      }
    }
    c.findings["generators"] = gens;
    if (d.frame.size() > 0) {
      CompleteSetReport cs = complete_set_analysis(*d.metric, d.frame, mode, d.chart, o.ctx);
      c.findings["complete_set"] = complete_set_json(cs);
    }
  }
  json scalars = json::object();
  for (const auto& [name, f] : d.scalars) {
    if (d.frame.size() == 0) break;
    CompleteSetReport cs = scalar_weak_analysis(f, d.frame, mode, d.chart, o.ctx);
    scalars[name] = complete_set_json(cs);
  }
  if (!scalars.empty()) c.findings["scalars"] = scalars;
  return c;
}

CommandResult cmd_algebra(const Options& o) {
  Definition d = load_definition(o.file);
  CommandResult c;
  c.name = "algebra";
  c.inputs = {{"file", o.file}};
  if (d.frame.size() < 2) throw DefinitionError("algebra needs at least two vectors");
  ExtractionOptions opt;
  opt.structure_coordinates = d.structure_coordinates;
  Extraction ex = try_extract_structure_functions(d.frame, d.chart, o.ctx, opt);
  c.findings["involutive"] = ex.involutive;
  c.findings["rank_deficient"] = ex.rank_deficient;
  if (!ex.involutive) {
    c.findings["message"] = ex.message;
    return c;
  }
  const StructureFunctions& s = ex.c;
  const auto& names = d.chart.names();
  json cs = json::object();
  for (int i = 0; i < s.size(); ++i)
    for (int j = i + 1; j < s.size(); ++j)
      for (int k = 0; k < s.size(); ++k)
        if (!s(i, j, k).is_zero())
          cs["c_" + d.frame.names[static_cast<std::size_t>(i)] + "," + d.frame.names[static_cast<std::size_t>(j)] + "^" +
             d.frame.names[static_cast<std::size_t>(k)]] = to_string(s(i, j, k), names);
  c.findings["structure_functions"] = cs;
  c.findings["structure_residual"] = s.residual_max;
  c.findings["lie_algebra"] = is_lie_algebra(s, d.chart, o.ctx);
  ResidualReport jac = jacobi_residual(s, d.frame, d.chart, o.ctx);
  c.findings["jacobi"] = zero_json(jac.check);
  AlgebraForm sigma = cartan_killing_sigma(s);
  AlgebraForm tau = extended_cartan_killing_tau(s, d.frame);
  c.findings["sigma"] = form_json(sigma, d.chart);
  c.findings["tau"] = form_json(tau, d.chart);
  c.findings["tau_rank"] = rank_json(rank_and_signature(tau, d.chart, o.ctx));
  c.residual_max = std::max(s.residual_max, jac.check.max_residual);
  return c;
}

CommandResult cmd_drag(const Options& o) {
  Definition d = load_definition(o.file);
  CommandResult c;
  c.name = "drag";
  c.inputs = {{"file", o.file}, {"vector", o.vector}};
  if (!d.metric) throw DefinitionError("drag needs a metric");
  int idx = -1;
  for (int i = 0; i < d.frame.size(); ++i)
    if (d.frame.names[static_cast<std::size_t>(i)] == o.vector) idx = i;
  if (idx < 0) throw DefinitionError("no vector named '" + o.vector + "'");
  MetricField g(*d.metric);
  DragResult r = drag(g, d.frame[idx], d.chart, o.ctx, o.vector);
  json comps = json::object();
  for (int a = 0; a < g.dim(); ++a)
    for (int b = a; b < g.dim(); ++b)
      if (!r.gamma(a, b).is_zero())
        comps["gamma_" + std::to_string(a) + std::to_string(b)] = to_string(r.gamma(a, b), d.chart.names());
  c.findings["gamma"] = comps;
  c.findings["rank"] = r.rank;
  c.findings["null_decomposition"] = r.null_decomposition;
  if (r.null_decomposition) {
    c.findings["phi"] = to_string(r.phi, d.chart.names());
    json k = json::array();
    for (const auto& e : r.k) k.push_back(to_string(e, d.chart.names()));
    c.findings["k"] = k;
  }
  return c;
}

CommandResult cmd_curvature(const Options& o) {
  Definition d = load_definition(o.file);
  CommandResult c;
  c.name = "curvature";
  c.inputs = {{"file", o.file}};
  if (!d.metric) throw DefinitionError("curvature needs a metric");
  MetricField g(*d.metric);
  g.require_nondegenerate(d.chart, o.ctx);
  const auto& names = d.chart.names();
  const int n = g.dim();
  TensorField G = christoffel(g);
  CurvatureBundle cb = curvature(g);
  json gam = json::object();
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        if (!G(k, a, b).is_zero())
          gam["Gamma^" + std::to_string(k) + "_" + std::to_string(a) + std::to_string(b)] = to_string(G(k, a, b), names);
  json ric = json::object();
  json ein = json::object();
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      if (!is_identically_zero(cb.ricci(a, b), d.chart, o.ctx))
        ric["R_" + std::to_string(a) + std::to_string(b)] = to_string(cb.ricci(a, b), names);
      if (!is_identically_zero(cb.einstein(a, b), d.chart, o.ctx))
        ein["G_" + std::to_string(a) + std::to_string(b)] = to_string(cb.einstein(a, b), names);
    }
  c.findings["christoffel"] = gam;
  c.findings["ricci"] = ric;
  c.findings["ricci_flat"] = ric.empty();
  c.findings["scalar"] = to_string(cb.scalar, names);
  c.findings["einstein"] = ein;
  if (n == 2) c.findings["gaussian_curvature"] = to_string(gaussian_curvature_2d(g), names);
  return c;
}

ExampleParams parse_params(const std::vector<std::string>& items) {
  ExampleParams p;
  for (const auto& it : items) {
    auto eq = it.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("--param expects key=value, got '" + it + "'");
    p[it.substr(0, eq)] = it.substr(eq + 1);
  }
  return p;
}

void print_findings(const json& j, const std::string& indent) {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object() && !v.empty()) {
      std::cout << indent << k << ":\n";
      print_findings(v, indent + "  ");
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      std::cout << indent << k << ":\n";
      for (const auto& e : v) {
        std::cout << indent << "  -\n";
        print_findings(e, indent + "    ");
      }
    } else {
      std::cout << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

void print_report(const Report& r, bool as_json) {
  if (as_json) {
    std::cout << r.to_json().dump(2) << "\n";
    return;
  }
  for (const auto& c : r.commands) {
    std::cout << c.name << "\n";
    print_findings(c.findings, "  ");
  }
}

int run_verify(const Options& o) {
  std::vector<CriterionResult> results = run_acceptance(o.ctx, o.only);
  Report rep;
  rep.seed = o.ctx.seed;
  for (const auto& r : results) {
    CommandResult c;
    c.name = r.id;
    c.inputs = {{"title", r.title}, {"samples", o.ctx.samples}, {"tolerance", o.ctx.tolerance}};
    c.findings["expected"] = r.expected;
    c.findings["observed"] = r.observed();
    json checks = json::array();
    for (const auto& k : r.checks)
      checks.push_back({{"label", k.label},
                        {"pass", k.pass},
                        {"informational", k.informational},
                        {"residual", k.residual},
                        {"detail", k.detail}});
    c.findings["checks"] = checks;
    c.residual_max = r.residual_max();
    c.pass = r.pass();
    rep.commands.push_back(std::move(c));
  }
  if (o.json_output) {
    std::cout << rep.to_json().dump(2) << "\n";
  } else {
    std::printf("%-6s  %-36s  %-66s  %s\n", "id", "criterion", "expected", "observed");
    for (const auto& r : results) {
      std::printf("%-6s  %-36s  %-66s  %s %s\n", r.id.c_str(), r.title.c_str(), r.expected.c_str(),
                  r.pass() ? "PASS" : "FAIL", r.observed().c_str());
    }
  }
  return rep.pass() ? kCompleted : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak Lie motions and extended Lie algebras"};
  app.require_subcommand(1);
  Options o;
  if (const char* env = std::getenv("WEAKLIE_SEED")) {
    try {
      o.ctx.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: WEAKLIE_SEED must be a non-negative integer\n";
      return kInputError;
    }
  }
  auto global = [&](CLI::App* sub) {
    sub->add_option("--seed", o.ctx.seed, "Sampling seed (default $WEAKLIE_SEED or 0)");
    sub->add_option("--samples", o.ctx.samples, "Sample points per zero test");
    sub->add_option("--tol", o.ctx.tolerance, "Relative zero tolerance");
    sub->add_flag("--json", o.json_output, "Machine-readable report");
  };

  auto* check = app.add_subcommand("check", "Classify generators and run the complete-set analysis");
  check->add_option("file", o.file, "Definition file")->required();
  check->add_option("--mode", o.mode, "def2 or def3 (default: the file's analysis.mode)")->check(CLI::IsMember({"def2", "def3"}));
  check->add_flag("--collineations", o.collineations, "Affine, curvature and Ricci collineations");
  check->add_flag("--integrability", o.integrability, "Integrability residuals");
  global(check);

  auto* algebra = app.add_subcommand("algebra", "Structure functions, Jacobi residual and Cartan-Killing forms");
  algebra->add_option("file", o.file, "Definition file")->required();
  global(algebra);

  auto* drag_cmd = app.add_subcommand("drag", "Lie derivative of the metric along one vector");
  drag_cmd->add_option("file", o.file, "Definition file")->required();
  drag_cmd->add_option("--vector", o.vector, "Vector name")->required();
  global(drag_cmd);

  auto* curv = app.add_subcommand("curvature", "Christoffel symbols, Ricci, scalar and Einstein tensors");
  curv->add_option("file", o.file, "Definition file")->required();
  global(curv);

  auto* cat = app.add_subcommand("catalog", "Worked examples");
  cat->require_subcommand(1);
  auto* list = cat->add_subcommand("list", "List examples");
  auto* emit = cat->add_subcommand("emit", "Print an example as a definition file");
  emit->add_option("name", o.name, "Example name")->required();
  emit->add_option("--param", o.params, "Parameter override key=value");

  auto* verify = app.add_subcommand("verify-paper", "Run the acceptance suite");
  verify->add_option("--only", o.only, "Single criterion, e.g. AC-8");
  global(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kCompleted : kInputError;
  }

  try {
    o.ctx.validate();
    if (*verify) return run_verify(o);
    if (*cat) {
      if (*list) {
        for (const auto& e : catalog_entries()) {
          std::string ps;
          for (const auto& p : e.parameters) ps += (ps.empty() ? "" : ", ") + p;
          std::printf("%-26s %s%s\n", e.name.c_str(), e.description.c_str(),
                      ps.empty() ? "" : (" [" + ps + "]").c_str());
        }
      } else {
        std::cout << emit_definition(instantiate(o.name, parse_params(o.params)));
      }
      return kCompleted;
    }
    Report rep;
    rep.seed = o.ctx.seed;
    if (*check) rep.commands.push_back(cmd_check(o));
    if (*algebra) rep.commands.push_back(cmd_algebra(o));
    if (*drag_cmd) rep.commands.push_back(cmd_drag(o));
    if (*curv) rep.commands.push_back(cmd_curvature(o));
    print_report(rep, o.json_output);
    return kCompleted;
  } catch (const ConventionMismatch& e) {
    std::cerr << "internal convention mismatch: " << e.what() << "\n";
    return kConvention;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
