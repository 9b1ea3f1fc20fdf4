#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "weaklie/catalog.hpp"
#include "weaklie/chart.hpp"
#include "weaklie/tensor.hpp"

namespace weaklie {

/// Malformed definition file; the message names the offending key.
class DefinitionError : public Error {
 public:
  using Error::Error;
};

struct AnalysisRequest {
  std::vector<std::string> commands;
  std::string mode = "def3";
  bool collineations = false;
  bool integrability = false;
};

/// Parsed contents of a JSON definition file.
struct Definition {
  Chart chart;
  Registry registry;
  std::map<std::string, std::vector<std::string>> opaque_arguments;
  /// Symmetric (0,2) field; may be degenerate.
  std::optional<TensorField> metric;
  FrameSet frame;
  std::vector<std::pair<std::string, Expr>> scalars;
  std::set<int> structure_coordinates;
  AnalysisRequest analysis;
};

/// Throws DefinitionError, or the parser's SyntaxError / UnknownIdentifier /
/// ArityMismatch with the position inside the offending string.
Definition parse_definition(const std::string& json_text);
Definition load_definition(const std::string& path);

Definition to_definition(const ExampleSpec& spec);
std::string emit_definition(const Definition& def);
std::string emit_definition(const ExampleSpec& spec);

}  // namespace weaklie
