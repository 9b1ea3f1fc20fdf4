#include "weaklie/catalog.hpp"

#include <functional>

#include "weaklie/errors.hpp"
#include "weaklie/parse.hpp"

namespace weaklie {

const TensorField& ExampleSpec::bilinear() const {
  if (metric) return metric->tensor();
  if (form) return *form;
  throw Error("example '" + name + "' has no metric or bilinear form");
}

namespace {

constexpr Interval kAngle{0.3, 2.8};

class Builder {
 public:
  Builder(const std::string& name, const std::string& description, const ExampleParams& params)
      : params_(params) {
    spec_.name = name;
    spec_.description = description;
  }

  void chart(std::vector<std::string> names) { spec_.chart = Chart(std::move(names)); }
  void standard_chart(int n, int first = 0) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(first + i));
    chart(std::move(names));
  }
  Chart& the_chart() { return spec_.chart; }
  int dim() const { return spec_.chart.dim(); }

  Expr parse(const std::string& text) const { return parse_expression(text, spec_.chart, spec_.registry); }

  Expr opaque(const std::string& name, const std::vector<std::string>& coords) {
    if (coords.empty()) return parameter(name);
    spec_.registry.add_opaque(name, static_cast<int>(coords.size()));
    spec_.opaque_arguments[name] = coords;
    std::vector<Expr> args;
    for (const auto& c : coords) args.push_back(Expr::coord(*spec_.chart.index_of(c)));
    return Expr::opaque(name, args);
  }

  void composite_opaque(const std::string& name, int arity) {
    spec_.registry.add_opaque(name, arity);
    spec_.opaque_arguments[name] = {};
  }

  Expr parameter(const std::string& name) {
    spec_.registry.add_parameter(name);
    return Expr::param(name);
  }

  /// Declared parameter that an override may replace by an expression.
  Expr symbol(const std::string& key) {
    parameter(key);
    return value(key, key);
  }

  /// Declared opaque function that an override may replace by an expression.
  Expr function(const std::string& key, const std::vector<std::string>& coords) {
    Expr def = opaque(key, coords);
    if (!params_.count(key)) return def;
    used_.insert(key);
    return parse(params_.at(key));
  }

  Expr value(const std::string& key, const std::string& fallback) {
    if (params_.count(key)) {
      used_.insert(key);
      return parse(params_.at(key));
    }
    return parse(fallback);
  }

  Rational rational(const std::string& key, const std::string& fallback) {
    if (params_.count(key)) {
      used_.insert(key);
      return parse_rational(params_.at(key));
    }
    return parse_rational(fallback);
  }

  int integer(const std::string& key, std::optional<int> fallback = std::nullopt) {
    if (!params_.count(key)) {
      if (!fallback) throw MissingParameter("example '" + spec_.name + "' requires parameter '" + key + "'");
      return *fallback;
    }
    used_.insert(key);
    Rational r = parse_rational(params_.at(key));
    if (!r.is_integer()) throw Error("parameter '" + key + "' must be an integer");
    return static_cast<int>(r.num());
  }

  VectorField vec(const std::vector<std::string>& comps) const {
    std::vector<Expr> c;
    for (const auto& s : comps) c.push_back(parse(s));
    return VectorField(std::move(c));
  }

  ExampleSpec& spec() { return spec_; }

  ExampleSpec finish() {
    for (const auto& [k, v] : params_)
      if (!used_.count(k)) throw Error("example '" + spec_.name + "' has no parameter '" + k + "'");
    return std::move(spec_);
  }

 private:
  const ExampleParams& params_;
  std::set<std::string> used_;
  ExampleSpec spec_;
};

std::vector<std::vector<Expr>> zeros(int n) { return std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)); }

MetricField sym_metric(std::vector<std::vector<Expr>> m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) m[i][j] = m[j][i];
  return MetricField::from_matrix(m);
}

void basis_frame(Builder& b, const std::string& prefix, int first = 0) {
  for (int i = 0; i < b.dim(); ++i)
    b.spec().frame.add(prefix + std::to_string(first + i), VectorField::basis(b.dim(), i));
}

// Multilinear polynomial over all subsets of `vars`, coefficient per subset.
Expr multilinear(const std::vector<int>& vars, const std::function<Expr(const std::string&)>& coefficient) {
  std::vector<Expr> terms;
  const std::size_t k = vars.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::string label;
    Expr term = 1;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::size_t{1} << i)) {
        label += std::to_string(vars[i]);
        term *= Expr::coord(vars[i] - 1);
      }
    }
    if (label.empty()) label = "0";
    terms.push_back(coefficient("c" + label) * term);
  }
  return Expr::sum(terms);
}

void g3_chart_and_frame(Builder& b) {
  b.chart({"x1", "x2", "x3"});
  b.spec().frame.add("X1", b.vec({"0", "1", "0"}));
  b.spec().frame.add("X2", b.vec({"0", "0", "1"}));
  b.spec().frame.add("X3", b.vec({"-1", "x3", "0"}));
}

void sss_frame_on(Builder& b) {
  b.the_chart().set_interval(2, kAngle);
  b.spec().frame.add("T", b.vec({"1", "0", "0", "0"}));
  b.spec().frame.add("xi2", b.vec({"0", "0", "0", "1"}));
  b.spec().frame.add("xi3", b.vec({"0", "0", "-sin(x3)", "-cos(x3)*cot(x2)"}));
  b.spec().frame.add("xi4", b.vec({"0", "0", "cos(x3)", "-sin(x3)*cot(x2)"}));
}

MetricField from_strings(Builder& b, const std::vector<std::vector<std::string>>& upper) {
  auto m = zeros(static_cast<int>(upper.size()));
  for (std::size_t i = 0; i < upper.size(); ++i)
    for (std::size_t j = 0; j < upper[i].size(); ++j) m[i][i + j] = b.parse(upper[i][j]);
  return sym_metric(m);
}

ExampleSpec make_kasner(const ExampleParams& p) {
  Builder b("kasner", "Kasner vacuum metric with exponents p1, p2, p3", p);
  b.standard_chart(4);
  Rational p1 = b.rational("p1", "2/3"), p2 = b.rational("p2", "2/3"), p3 = b.rational("p3", "-1/3");
  if (p1 + p2 + p3 != Rational(1) || p1 * p1 + p2 * p2 + p3 * p3 != Rational(1))
    throw InvariantViolation("Kasner exponents must satisfy p1+p2+p3 = p1^2+p2^2+p3^2 = 1");
  Expr t = Expr::coord(0);
  b.spec().metric = MetricField::diagonal(
      {Expr(1), -pow(t, Rational(2) * p1), -pow(t, Rational(2) * p2), -pow(t, Rational(2) * p3)});
  Expr f = b.function("f", {"x0"});
  b.spec().frame.add("T", VectorField::basis(4, 0));
  b.spec().frame.add("X", f * VectorField::basis(4, 1));
  b.spec().frame.add("P1", VectorField::basis(4, 1));
  return b.finish();
}

MetricField g3_metric(Builder& b) {
  std::vector<std::string> keys = {"a11", "a12", "a13", "a22", "a23", "a33"};
  for (const auto& k : keys) b.parameter(k);
  return from_strings(b, {{"a11", "a12", "a12*x1 + a13"},
                          {"a22", "a22*x1 + a23"},
                          {"a22*x1^2 + 2*a23*x1 + a33"}});
}

ExampleSpec make_g3_frame(const ExampleParams& p) {
  Builder b("g3_frame", "Three-parameter group with [X2, X3] = X1", p);
  g3_chart_and_frame(b);
  return b.finish();
}

ExampleSpec make_g3_metric(const ExampleParams& p) {
  Builder b("g3_metric", "Metric invariant under the three-parameter group", p);
  g3_chart_and_frame(b);
  b.spec().metric = g3_metric(b);
  return b.finish();
}

ExampleSpec make_sss_frame(const ExampleParams& p) {
  Builder b("sss_frame", "Time translation and spatial rotations with a static spherically symmetric metric", p);
  b.standard_chart(4);
  Expr a = b.function("alpha", {"x1"});
  Expr be = b.function("beta", {"x1"});
  Expr e = b.function("eps", {"x1"});
  Expr s = sin(Expr::coord(2));
  b.spec().metric = MetricField::diagonal({a, -be, -e, -e * s * s});
  sss_frame_on(b);
  return b.finish();
}

ExampleSpec make_weakly_static(const ExampleParams& p) {
  Builder b("weakly_static", "Weakly static metrics x0 c_ab + d_ab", p);
  b.standard_chart(4);
  auto m = zeros(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      std::string ij = std::to_string(i) + std::to_string(j);
      m[i][j] = Expr::coord(0) * b.function("c" + ij, {"x1", "x2", "x3"}) + b.function("d" + ij, {"x1", "x2", "x3"});
    }
  b.spec().metric = sym_metric(m);
  b.spec().frame.add("T", VectorField::basis(4, 0));
  return b.finish();
}

TensorField sss_form(const Expr& alpha, const Expr& beta, const Expr& e1, const Expr& e2) {
  Expr r = Expr::coord(2) * e1 + e2;
  Expr s = sin(Expr::coord(2));
  return TensorField::from_matrix({{alpha, 0, 0, 0}, {0, -beta, 0, 0}, {0, 0, -r, 0}, {0, 0, 0, -r * s * s}});
}

ExampleSpec make_weak_sss(const ExampleParams& p) {
  Builder b("weak_sss", "Weakly spherically symmetric metrics x0 d_ab + f_ab", p);
  b.standard_chart(4);
  TensorField f = sss_form(b.function("alpha", {"x1"}), b.function("beta", {"x1"}), b.function("eps1", {"x1"}),
                           b.function("eps2", {"x1"}));
  TensorField d = sss_form(b.function("dalpha", {"x1"}), b.function("dbeta", {"x1"}), b.function("deps1", {"x1"}),
                           b.function("deps2", {"x1"}));
  b.spec().metric = MetricField(Expr::coord(0) * d + f);
  b.spec().form = f;
  sss_frame_on(b);
  return b.finish();
}

ExampleSpec make_weak_sss_surface(const ExampleParams& p) {
  Builder b("weak_sss_surface", "Angular part (eps1 x2 + eps2)(dx2^2 + sin(x2)^2 dx3^2) of a weakly spherical metric",
            p);
  b.chart({"x2", "x3"});
  b.the_chart().set_interval(0, kAngle);
  Expr e1 = b.symbol("eps1");
  Expr e2 = b.symbol("eps2");
  Expr r = e1 * Expr::coord(0) + e2;
  Expr s = sin(Expr::coord(0));
  b.spec().metric = MetricField::diagonal({r, r * s * s});
  b.spec().frame.add("xi2", b.vec({"0", "1"}));
  return b.finish();
}

void g3_scalar_params(Builder& b, const std::vector<std::string>& keys) {
  for (const auto& k : keys) b.parameter(k);
}

ExampleSpec make_g3_scalar_def3(const ExampleParams& p) {
  Builder b("g3_scalar_def3", "Scalar weakly invariant under the three-parameter group", p);
  g3_chart_and_frame(b);
  g3_scalar_params(b, {"a0", "b0", "c0", "b1", "c1", "d1", "d0"});
  b.spec().scalars["f"] = b.value("f", "a0*x2*x3 + b0*x1*(x2 - x1*x3) + c0*x1*x3 + b1*x2 + c1*x3 + d1*x1 + d0");
  b.spec().scalars["f_general"] =
      b.value("f_general", "a0*x2*x3 + b0*x1*(x2 + x1*x3) + c0*x1*x3 + b1*x2 + c1*x3 + d1*x1 + d0");
  return b.finish();
}

ExampleSpec make_g3_scalar_def2(const ExampleParams& p) {
  Builder b("g3_scalar_def2", "Scalar with vanishing upper triangle of second Lie derivatives", p);
  g3_chart_and_frame(b);
  g3_scalar_params(b, {"c0", "c1", "d1", "d0"});
  b.spec().scalars["f"] = b.value("f", "c0*(x1*x3 + x2) + c1*x3 + d1*x1 + d0");
  return b.finish();
}

ExampleSpec make_g3_scalar_all(const ExampleParams& p) {
  Builder b("g3_scalar_all", "Scalar annihilated by every second Lie derivative of the group", p);
  g3_chart_and_frame(b);
  g3_scalar_params(b, {"c1", "d1", "d0"});
  b.spec().scalars["f"] = b.value("f", "c1*x3 + d1*x1 + d0");
  return b.finish();
}

ExampleSpec make_g3_weak_def2(const ExampleParams& p) {
  Builder b("g3_weak_metric_def2", "Metric weakly invariant under the group, upper-triangle form", p);
  g3_chart_and_frame(b);
  for (int i = 1; i <= 24; ++i) b.parameter("k" + std::to_string(i));
  b.spec().metric = from_strings(
      b, {{"k1 + k2*x3 + k3*x1 + k4*x1*x3 + k4*x2", "k10*x3 + k11*x1 + k12*x1*x3 + k12*x2 + k5 - k8*x3",
           "k10*x1*x3 + k11*x1^2 + k12*x1^2*x3 + k12*x1*x2 + k6 + k7*x3 + k8*x2 + k9*x1"},
          {"2*k14 - k20*x3 - k21 + k22*x3 + k23*x1 + k24*x1*x3 + k24*x2",
           "k13 + k14*x1 - k17*x3/2 + k19*x3/2 - k20*x1*x3/2 + k20*x2/2 + k22*x1*x3 + k23*x1^2 + k24*x1^2*x3 + "
           "k24*x1*x2"},
          {"k15 + k16*x3 + k17*x2 + k18*x1 + k19*x1*x3 + k20*x1*x2 + k21*x1^2 + k22*x1^2*x3 + k23*x1^3 + "
           "k24*x1^3*x3 + k24*x1^2*x2"}});
  return b.finish();
}

ExampleSpec make_g3_weak_def3(const ExampleParams& p) {
  Builder b("g3_weak_metric_def3", "Metric weakly invariant under the group, diagonal form", p);
  g3_chart_and_frame(b);
  for (int i = 1; i <= 42; ++i) b.parameter("m" + std::to_string(i));
  b.spec().metric = from_strings(
      b, {{"m1 + m2*x3 + m3*x2 + m4*x2*x3 + m5*x1 + m6*x1*x3 + m7*x1^2*x3 + m7*x1*x2",
           "m10*x1*x3 + m10*x2 + m17*x2 + m18*x2*x3 + m19*x1 - m20*x2 + m21*x1^2*x3 + m21*x1*x2 + m8 + m9*x3",
           "m11 + m12*x3 + m13*x2 + m14*x2*x3 + m15*x1 + m16*x1*x3 + m17*x1*x2 + m18*x1*x2*x3 + m19*x1^2 + "
           "m20*x1^2*x3 + m21*x1^3*x3 + m21*x1^2*x2"},
          {"-2*m24*x3 + 2*m25 + 2*m26*x3 + 2*m27*x1*x3 + 2*m27*x2 + m34*x3 - m36 - m37*x3 + m38*x2 + m39*x2*x3 + "
           "m40*x1 - m41*x1*x3 - 2*m41*x2 + m42*x1^2*x3 + m42*x1*x2",
           "m22 + m23*x3 + m24*x2 + m25*x1 + m26*x1*x3 + m27*x1^2*x3 + m27*x1*x2 + m35*x2*x3/2 + m38*x1*x2 + "
           "m39*x1*x2*x3 + m40*x1^2 - m41*x1*x2 + m42*x1^3*x3 + m42*x1^2*x2"},
          {"m28 + m29*x3 + m30*x2 + m31*x2*x3 + m32*x1 + m33*x1*x3 + m34*x1*x2 + m35*x1*x2*x3 + m36*x1^2 + "
           "m37*x1^2*x3 + m38*x1^2*x2 + m39*x1^2*x2*x3 + m40*x1^3 + m41*x1^3*x3 + m42*x1^4*x3 + m42*x1^3*x2"}});
  return b.finish();
}

ExampleSpec make_translations(const ExampleParams& p) {
  Builder b("translations", "Coordinate translations acting on a multilinear scalar", p);
  int n = b.integer("n");
  b.standard_chart(n, 1);
  basis_frame(b, "P", 1);
  std::vector<int> vars;
  for (int i = 1; i <= n; ++i) vars.push_back(i);
  b.spec().scalars["f"] = multilinear(vars, [&](const std::string& c) { return b.parameter(c); });
  return b.finish();
}

ExampleSpec make_rotation_pair(const ExampleParams& p) {
  Builder b("rotation_pair", "Single rotation in the (x^i, x^k) plane acting on an angular scalar", p);
  int n = b.integer("n", 3);
  int i = b.integer("i", 1);
  int k = b.integer("k", 2);
  b.standard_chart(n, 1);
  if (i < 1 || k < 1 || i > n || k > n || i == k) throw Error("rotation_pair needs distinct 1 <= i, k <= n");
  std::vector<Expr> comps(static_cast<std::size_t>(n), Expr(0));
  Expr xi = Expr::coord(i - 1), xk = Expr::coord(k - 1);
  comps[static_cast<std::size_t>(k - 1)] = xi;
  comps[static_cast<std::size_t>(i - 1)] = -xk;
  b.spec().frame.add("R", VectorField(comps));
  std::vector<std::string> rest;
  for (int a = 1; a <= n; ++a)
    if (a != i && a != k) rest.push_back("x" + std::to_string(a));
  Expr a1 = b.opaque("alpha1", rest);
  Expr a2 = b.opaque("alpha2", rest);
  b.spec().scalars["f"] = a1 * atan(xi / xk) + a2;
  b.spec().scalars["alpha1"] = a1;
  return b.finish();
}

ExampleSpec make_full_rotation(const ExampleParams& p) {
  Builder b("full_rotation_so3", "Rotation group acting on a radial scalar", p);
  b.chart({"x1", "x2", "x3"});
  b.spec().frame.add("L1", b.vec({"0", "-x3", "x2"}));
  b.spec().frame.add("L2", b.vec({"x3", "0", "-x1"}));
  b.spec().frame.add("L3", b.vec({"-x2", "x1", "0"}));
  b.composite_opaque("F", 1);
  b.spec().scalars["f"] = b.parse("F(sqrt(x1^2 + x2^2 + x3^2))");
  return b.finish();
}

ExampleSpec make_generalized_translations(const ExampleParams& p) {
  Builder b("generalized_translations", "Translations scaled by arbitrary functions of the remaining coordinates", p);
  int n = b.integer("n", 3);
  int k = b.integer("k", 2);
  b.standard_chart(n, 1);
  if (k < 1 || k >= n) throw Error("generalized_translations needs 1 <= k < n");
  std::vector<std::string> rest;
  for (int a = k + 1; a <= n; ++a) rest.push_back("x" + std::to_string(a));
  std::vector<int> vars;
  for (int a = 1; a <= k; ++a) {
    vars.push_back(a);
    Expr g = b.function("G" + std::to_string(a), rest);
    b.spec().frame.add("X" + std::to_string(a), g * VectorField::basis(n, a - 1));
  }
  b.spec().scalars["f"] = multilinear(vars, [&](const std::string& c) { return b.opaque(c, rest); });
  return b.finish();
}

void mach_frame(Builder& b) {
  Expr f = b.function("f", {"x0"});
  b.spec().frame.add("X", f * VectorField::basis(4, 1));
  b.spec().frame.add("Y", VectorField::basis(4, 0));
}

ExampleSpec make_mach_poincare(const ExampleParams& p) {
  Builder b("mach_poincare_subgroup", "Infinitesimal generators f(x0) d1 and d0 of the Mach-Poincare group", p);
  b.standard_chart(4);
  mach_frame(b);
  return b.finish();
}

ExampleSpec make_rigid_body(const ExampleParams& p) {
  Builder b("rigid_body", "Observables of a rigid body: time, scaled translations and rotations", p);
  b.standard_chart(4);
  Expr f1 = b.function("f1", {"x0"}), f2 = b.function("f2", {"x0"}), f3 = b.function("f3", {"x0"});
  Expr w23 = b.function("w23", {"x0"}), w13 = b.function("w13", {"x0"}), w12 = b.function("w12", {"x0"});
  Expr x1 = Expr::coord(1), x2 = Expr::coord(2), x3 = Expr::coord(3);
  auto& fr = b.spec().frame;
  fr.add("T", VectorField::basis(4, 0));
  fr.add("X1", f1 * VectorField::basis(4, 1));
  fr.add("X2", f2 * VectorField::basis(4, 2));
  fr.add("X3", f3 * VectorField::basis(4, 3));
  fr.add("Y1", VectorField({0, 0, w23 * x3, -w23 * x2}));
  fr.add("Y2", VectorField({0, w13 * x3, 0, -w13 * x1}));
  fr.add("Y3", VectorField({0, w12 * x2, -w12 * x1, 0}));
  b.spec().structure_coordinates = {0};
  return b.finish();
}

ExampleSpec make_extended_motion_metric(const ExampleParams& p) {
  Builder b("extended_motion_metric", "Degenerate bilinear form of rank 3 invariant under the Mach-Poincare pair", p);
  b.standard_chart(4);
  auto m = zeros(4);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 0}, {0, 2}, {0, 3}, {2, 2}, {2, 3}, {3, 3}})
    m[i][j] = b.function("a" + std::to_string(i) + std::to_string(j), {"x2", "x3"});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) m[i][j] = m[j][i];
  b.spec().form = TensorField::from_matrix(m);
  mach_frame(b);
  return b.finish();
}

ExampleSpec make_extended_weak_metric(const ExampleParams& p) {
  Builder b("extended_weak_metric", "Metric linear in x1 that is weakly invariant under the Mach-Poincare pair", p);
  b.standard_chart(4);
  auto m = zeros(4);
  Expr x1 = Expr::coord(1);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 0}, {0, 2}, {0, 3}, {2, 2}, {2, 3}, {3, 3}})
    m[i][j] += x1 * b.function("a" + std::to_string(i) + std::to_string(j), {"x2", "x3"});
  for (auto [i, j] :
       std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}})
    m[i][j] += b.function("b" + std::to_string(i) + std::to_string(j), {"x2", "x3"});
  b.spec().metric = sym_metric(m);
  mach_frame(b);
  return b.finish();
}

ExampleSpec make_two_dim_extended(const ExampleParams& p) {
  Builder b("two_dim_extended", "Two-dimensional frame xi d1, xi d2", p);
  b.chart({"x1", "x2"});
  Expr xi = b.function("xi", {"x1", "x2"});
  b.spec().frame.add("X1", xi * VectorField::basis(2, 0));
  b.spec().frame.add("X2", xi * VectorField::basis(2, 1));
  return b.finish();
}

ExampleSpec make_two_dim_aligned(const ExampleParams& p) {
  Builder b("two_dim_aligned", "Two-dimensional frame of aligned vectors xi d1, eta d1", p);
  b.chart({"x1", "x2"});
  Expr xi = b.function("xi", {"x1", "x2"});
  Expr eta = b.function("eta", {"x1", "x2"});
  b.spec().frame.add("X1", xi * VectorField::basis(2, 0));
  b.spec().frame.add("X2", eta * VectorField::basis(2, 0));
  StructureFunctions c(2);
  c.set(0, 1, 0, xi * diff(eta, 0) - eta * diff(xi, 0));
  b.spec().structure = c;
  return b.finish();
}

ExampleSpec make_frw_substrate(const ExampleParams& p) {
  Builder b("frw_substrate", "Spatially flat cosmic substrate with scale factor squared (2/3) x0^(3/2)", p);
  b.standard_chart(4);
  b.the_chart().set_interval(2, kAngle);
  b.spec().metric = MetricField::diagonal({b.parse("1"), b.parse("-2/3*x0^(3/2)"), b.parse("-2/3*x0^(3/2)*x1^2"),
                                           b.parse("-2/3*x0^(3/2)*x1^2*sin(x2)^2")});
  return b.finish();
}

ExampleSpec make_flat(const std::string& name, const ExampleParams& p, bool lorentzian) {
  Builder b(name, lorentzian ? "Minkowski space" : "Euclidean space", p);
  int n = b.integer("n");
  b.standard_chart(n);
  std::vector<Expr> d(static_cast<std::size_t>(n), Expr(lorentzian ? -1 : 1));
  d[0] = 1;
  b.spec().metric = MetricField::diagonal(d);
  basis_frame(b, "P");
  return b.finish();
}

std::vector<Expr> minkowski_diag() { return {1, -1, -1, -1}; }

ExampleSpec make_appendix3(const ExampleParams& p) {
  Builder b("appendix3_solution", "Homothetic motion c0 x^c + d_r F^rc of Minkowski space", p);
  b.standard_chart(4);
  auto eta = minkowski_diag();
  b.spec().metric = MetricField::diagonal(eta);
  Expr c0 = b.symbol("c0");
  std::vector<std::vector<Expr>> F(4, std::vector<Expr>(4));
  for (int r = 0; r < 4; ++r)
    for (int s = r + 1; s < 4; ++s) {
      std::string key = "F" + std::to_string(r) + std::to_string(s);
      F[r][s] = b.value(key, key == "F01" ? "(x0^2 - x1^2)/2" : "0");
      F[s][r] = -F[r][s];
    }
  std::vector<Expr> xi(4);
  for (int c = 0; c < 4; ++c) {
    Expr v = c0 * Expr::coord(c);
    for (int r = 0; r < 4; ++r) v += diff(F[r][c], r);
    xi[c] = v;
  }
  b.spec().frame.add("xi", VectorField(xi));
  return b.finish();
}

ExampleSpec make_weak_affine_minkowski(const ExampleParams& p) {
  Builder b("weak_affine_minkowski", "Weak affine collineation beta^c f(alpha_rs x^r x^s) of Minkowski space", p);
  b.standard_chart(4);
  b.spec().metric = MetricField::diagonal(minkowski_diag());
  const char* beta_def[4] = {"1", "1", "0", "0"};
  const char* alpha_def[4][4] = {{"1", "-1", "0", "0"}, {"-1", "1", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "2"}};
  std::vector<Rational> beta(4);
  std::vector<std::vector<Rational>> alpha(4, std::vector<Rational>(4));
  for (int c = 0; c < 4; ++c) beta[c] = b.rational("beta" + std::to_string(c), beta_def[c]);
  for (int r = 0; r < 4; ++r)
    for (int s = r; s < 4; ++s) {
      alpha[r][s] = b.rational("alpha" + std::to_string(r) + std::to_string(s), alpha_def[r][s]);
      alpha[s][r] = alpha[r][s];
    }
  for (int a = 0; a < 4; ++a) {
    Rational t;
    for (int s = 0; s < 4; ++s) t = t + beta[s] * alpha[s][a];
    if (t != Rational(0)) throw InvariantViolation("weak_affine_minkowski needs beta^s alpha_sa = 0");
  }
  Expr q = 0;
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) q += Expr(alpha[r][s]) * Expr::coord(r) * Expr::coord(s);
  b.composite_opaque("f", 1);
  Expr f = Expr::opaque("f", {q});
  std::vector<Expr> xi(4);
  for (int c = 0; c < 4; ++c) xi[c] = Expr(beta[c]) * f;
  b.spec().frame.add("xi", VectorField(xi));
  return b.finish();
}

struct Entry {
  CatalogEntry info;
  std::function<ExampleSpec(const ExampleParams&)> make;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    auto add = [&](std::string name, std::vector<std::string> params, std::vector<std::string> required,
                   std::function<ExampleSpec(const ExampleParams&)> make) {
      ExampleParams probe;
      for (const auto& r : required) probe[r] = "3";
      std::string desc = make(probe).description;
      e.push_back({{std::move(name), desc, std::move(params), std::move(required)}, std::move(make)});
    };
    add("kasner", {"p1", "p2", "p3", "f"}, {}, make_kasner);
    add("g3_frame", {}, {}, make_g3_frame);
    add("g3_metric", {}, {}, make_g3_metric);
    add("sss_frame", {"alpha", "beta", "eps"}, {}, make_sss_frame);
    add("weakly_static", {"c00..c33", "d00..d33"}, {}, make_weakly_static);
    add("weak_sss", {"alpha", "beta", "eps1", "eps2", "dalpha", "dbeta", "deps1", "deps2"}, {}, make_weak_sss);
    add("weak_sss_surface", {"eps1", "eps2"}, {}, make_weak_sss_surface);
    add("g3_scalar_def3", {"f", "f_general"}, {}, make_g3_scalar_def3);
    add("g3_scalar_def2", {"f"}, {}, make_g3_scalar_def2);
    add("g3_scalar_all", {"f"}, {}, make_g3_scalar_all);
    add("g3_weak_metric_def2", {}, {}, make_g3_weak_def2);
    add("g3_weak_metric_def3", {}, {}, make_g3_weak_def3);
    add("translations", {"n"}, {"n"}, make_translations);
    add("rotation_pair", {"n", "i", "k"}, {}, make_rotation_pair);
    add("full_rotation_so3", {}, {}, make_full_rotation);
    add("generalized_translations", {"n", "k", "G1..Gk"}, {}, make_generalized_translations);
    add("mach_poincare_subgroup", {"f"}, {}, make_mach_poincare);
    add("rigid_body", {"f1", "f2", "f3", "w23", "w13", "w12"}, {}, make_rigid_body);
    add("extended_motion_metric", {"a00..a33", "f"}, {}, make_extended_motion_metric);
    add("extended_weak_metric", {"a00..a33", "b00..b33", "f"}, {}, make_extended_weak_metric);
    add("two_dim_extended", {"xi"}, {}, make_two_dim_extended);
    add("two_dim_aligned", {"xi", "eta"}, {}, make_two_dim_aligned);
    add("frw_substrate", {}, {}, make_frw_substrate);
    add("minkowski", {"n"}, {"n"}, [](const ExampleParams& p) { return make_flat("minkowski", p, true); });
    add("euclidean", {"n"}, {"n"}, [](const ExampleParams& p) { return make_flat("euclidean", p, false); });
    add("appendix3_solution", {"c0", "F01..F23"}, {}, make_appendix3);
    add("weak_affine_minkowski", {"beta0..beta3", "alpha00..alpha33"}, {}, make_weak_affine_minkowski);
    return e;
  }();
  return entries;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> infos = [] {
    std::vector<CatalogEntry> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

ExampleSpec instantiate(const std::string& name, const ExampleParams& params) {
  for (const auto& e : registry())
    if (e.info.name == name) return e.make(params);
  throw UnknownExample("unknown example '" + name + "'");
}

}  // namespace weaklie
