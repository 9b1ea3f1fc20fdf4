#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "weaklie/algebroid.hpp"
#include "weaklie/chart.hpp"
#include "weaklie/geometry.hpp"
#include "weaklie/tensor.hpp"

namespace weaklie {

/// Constructed objects of one worked example.
struct ExampleSpec {
  std::string name;
  std::string description;
  Chart chart;
  Registry registry;
  /// Coordinate arguments each opaque function was declared with; empty for
  /// functions applied to composite arguments.
  std::map<std::string, std::vector<std::string>> opaque_arguments;
  std::optional<MetricField> metric;
  /// Symmetric (0,2) field that is not required to be invertible.
  std::optional<TensorField> form;
  FrameSet frame;
  std::map<std::string, Expr> scalars;
  /// Structure functions entered by hand, for frames the solver cannot invert.
  std::optional<StructureFunctions> structure;
  /// Coordinates the structure functions may depend on; empty means all.
  std::set<int> structure_coordinates;

  /// metric if present, otherwise form.
  const TensorField& bilinear() const;
};

/// Overrides by key; values are expression strings (or integers / rationals
/// for integer and rational keys).
using ExampleParams = std::map<std::string, std::string>;

struct CatalogEntry {
  std::string name;
  std::string description;
  std::vector<std::string> parameters;
  std::vector<std::string> required;
};

const std::vector<CatalogEntry>& catalog_entries();

/// Throws UnknownExample, MissingParameter, or Error for an unknown key.
ExampleSpec instantiate(const std::string& name, const ExampleParams& params = {});

}  // namespace weaklie
