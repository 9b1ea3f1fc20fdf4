#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace weaklie {

struct Interval {
  double lo = 0.3;
  double hi = 2.7;
};

/// Coordinate system x^0..x^{n-1} with sampling boxes for the numeric oracle.
class Chart {
 public:
  static constexpr int kMinDim = 2;
  static constexpr int kMaxDim = 8;

  Chart() = default;
  explicit Chart(std::vector<std::string> names);
  /// Chart named x0..x{n-1}.
  static Chart standard(int n);

  int dim() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
  std::optional<int> index_of(const std::string& name) const;

  Interval interval(int i) const { return intervals_.at(static_cast<std::size_t>(i)); }
  Chart& set_interval(int i, Interval box);

  Interval parameter_interval(const std::string& name) const;
  Chart& set_parameter_interval(const std::string& name, Interval box);
  const std::map<std::string, Interval>& parameter_intervals() const { return param_intervals_; }

  static Interval default_parameter_interval() { return {0.5, 1.5}; }

 private:
  std::vector<std::string> names_;
  std::vector<Interval> intervals_;
  std::map<std::string, Interval> param_intervals_;
};

/// Parameter and opaque-function declarations the parser resolves against.
class Registry {
 public:
  Registry& add_parameter(const std::string& name);
  Registry& add_opaque(const std::string& name, int arity);

  bool has_parameter(const std::string& name) const { return parameters_.count(name) > 0; }
  std::optional<int> opaque_arity(const std::string& name) const;
  const std::set<std::string>& parameters() const { return parameters_; }
  const std::map<std::string, int>& opaques() const { return opaques_; }

 private:
  std::set<std::string> parameters_;
  std::map<std::string, int> opaques_;
};

bool is_identifier(const std::string& s);

}  // namespace weaklie
