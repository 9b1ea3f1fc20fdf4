#pragma once

#include <string>
#include <vector>

#include "weaklie/numeric.hpp"

namespace weaklie {

struct AcceptanceCheck {
  std::string label;
  bool pass = false;
  std::string detail;
  double residual = 0.0;
  /// Shown for context; does not affect the criterion verdict.
  bool informational = false;
};

struct CriterionResult {
  std::string id;
  std::string title;
  std::string expected;
  std::vector<AcceptanceCheck> checks;
  double seconds = 0.0;

  bool pass() const;
  std::string observed() const;
  double residual_max() const;
};

const std::vector<std::string>& criterion_ids();

/// Throws Error for an unknown id.
CriterionResult run_criterion(const std::string& id, const NumericContext& ctx);

/// Every criterion, or only `only` when non-empty.
std::vector<CriterionResult> run_acceptance(const NumericContext& ctx, const std::string& only = "");

}  // namespace weaklie
