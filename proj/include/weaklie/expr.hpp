#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "weaklie/rational.hpp"

namespace weaklie {

enum class Kind : std::uint8_t { Rational, Coordinate, Parameter, Function, Opaque, Power, Product, Sum };

enum class Fn : std::uint8_t { Sin, Cos, Tan, Cot, Exp, Ln, Sqrt, Atan, Abs };

const char* fn_name(Fn fn);
std::optional<Fn> fn_from_name(const std::string& name);

struct Node;

/// Immutable symbolic scalar. Construction always goes through the
/// normalizing smart constructors, so two equal normal forms share a hash.
class Expr {
 public:
  Expr();
  Expr(Rational value);  // NOLINT(google-explicit-constructor)
  Expr(std::int64_t value) : Expr(Rational(value)) {}  // NOLINT(google-explicit-constructor)
  Expr(int value) : Expr(Rational(value)) {}  // NOLINT(google-explicit-constructor)

  static Expr coord(int index);
  static Expr param(const std::string& name);
  static Expr apply(Fn fn, const Expr& arg);
  /// Opaque function symbol with per-argument derivative orders.
  static Expr opaque(const std::string& name, std::vector<int> orders, std::vector<Expr> args);
  static Expr opaque(const std::string& name, std::vector<Expr> args);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(const Expr& base, const Rational& exponent);

  Kind kind() const;
  const Node& node() const { return *node_; }
  const Node* ptr() const { return node_.get(); }
  std::size_t hash() const;

  bool is_rational() const { return kind() == Kind::Rational; }
  bool is_zero() const;
  bool is_one() const;
  const Rational& rational() const;
  int coord_index() const;
  const std::string& name() const;
  Fn fn() const;
  const Rational& exponent() const;
  const std::vector<int>& orders() const;
  const std::vector<Expr>& children() const;

  /// Total number of nodes in the tree (shared subtrees counted each time).
  std::size_t size() const;

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  /// Structural equality of normal forms.
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  friend struct ExprAccess;
  std::shared_ptr<const Node> node_;
};

struct Node {
  Kind kind = Kind::Rational;
  Fn fn = Fn::Sin;
  int index = 0;
  std::size_t hash = 0;
  Rational value;
  std::string name;
  std::vector<int> orders;
  std::vector<Expr> children;
};

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

/// Canonical total order on normal forms.
int compare(const Expr& a, const Expr& b);

Expr pow(const Expr& base, const Rational& exponent);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr cot(const Expr& e);
Expr exp(const Expr& e);
Expr ln(const Expr& e);
Expr sqrt(const Expr& e);
Expr atan(const Expr& e);
Expr abs(const Expr& e);

/// Exact partial derivative with respect to coordinate `coord`.
Expr diff(const Expr& e, int coord);

/// Rebuilds `e` bottom-up; `mapper` may replace any node before recursion.
Expr substitute(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& mapper);
Expr substitute_coord(const Expr& e, int coord, const Expr& value);
Expr substitute_param(const Expr& e, const std::string& name, const Expr& value);

bool depends_on_coord(const Expr& e, int coord);
bool is_coordinate_free(const Expr& e);

struct SymbolSet {
  std::set<int> coordinates;
  std::set<std::string> parameters;
  std::map<std::string, int> opaque_arity;
};
void collect_symbols(const Expr& e, SymbolSet& out);

/// Splits a normalized term into rational coefficient and remaining factor.
std::pair<Rational, Expr> split_coefficient(const Expr& e);

/// Prints in the input grammar; parse(to_string(e)) reproduces e.
std::string to_string(const Expr& e, const std::vector<std::string>& coordinate_names);
std::string to_string(const Expr& e);

}  // namespace weaklie
