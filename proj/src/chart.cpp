#include "weaklie/chart.hpp"

#include <cctype>

#include "weaklie/errors.hpp"
#include "weaklie/expr.hpp"

namespace weaklie {

bool is_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

Chart::Chart(std::vector<std::string> names) : names_(std::move(names)) {
  if (dim() < kMinDim || dim() > kMaxDim) {
    throw Error("chart dimension must be between 2 and 8, got " + std::to_string(dim()));
  }
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!is_identifier(n)) throw Error("invalid coordinate name '" + n + "'");
    if (fn_from_name(n)) throw Error("coordinate name '" + n + "' shadows a builtin function");
    if (!seen.insert(n).second) throw Error("duplicate coordinate name '" + n + "'");
  }
  intervals_.assign(names_.size(), Interval{});
}

Chart Chart::standard(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return Chart(std::move(names));
}

std::optional<int> Chart::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

Chart& Chart::set_interval(int i, Interval box) {
  if (!(box.lo < box.hi)) throw Error("empty sampling interval for coordinate " + std::to_string(i));
  intervals_.at(static_cast<std::size_t>(i)) = box;
  return *this;
}

Interval Chart::parameter_interval(const std::string& name) const {
  auto it = param_intervals_.find(name);
  return it == param_intervals_.end() ? default_parameter_interval() : it->second;
}

Chart& Chart::set_parameter_interval(const std::string& name, Interval box) {
  if (!(box.lo < box.hi)) throw Error("empty sampling interval for parameter " + name);
  param_intervals_[name] = box;
  return *this;
}

Registry& Registry::add_parameter(const std::string& name) {
  if (!is_identifier(name)) throw Error("invalid parameter name '" + name + "'");
  if (opaques_.count(name)) throw Error("'" + name + "' is already an opaque function");
  parameters_.insert(name);
  return *this;
}

Registry& Registry::add_opaque(const std::string& name, int arity) {
  if (!is_identifier(name)) throw Error("invalid function name '" + name + "'");
  if (fn_from_name(name)) throw Error("'" + name + "' shadows a builtin function");
  if (parameters_.count(name)) throw Error("'" + name + "' is already a parameter");
  if (arity < 1) throw Error("opaque function '" + name + "' needs at least one argument");
  opaques_[name] = arity;
  return *this;
}

std::optional<int> Registry::opaque_arity(const std::string& name) const {
  auto it = opaques_.find(name);
  if (it == opaques_.end()) return std::nullopt;
  return it->second;
}

}  // namespace weaklie
