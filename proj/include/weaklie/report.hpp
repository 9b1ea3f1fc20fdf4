#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace weaklie {

inline constexpr const char* kVersion = "0.1.0";

struct CommandResult {
  std::string name;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  nlohmann::ordered_json findings = nlohmann::ordered_json::object();
  double residual_max = 0.0;
  bool pass = true;
};

/// Machine report: {version, seed, commands:[{name, inputs, findings, residual_max, pass}], pass}.
struct Report {
  std::string version = kVersion;
  std::uint64_t seed = 0;
  std::vector<CommandResult> commands;

  bool pass() const;
  nlohmann::ordered_json to_json() const;
  static Report from_json(const nlohmann::ordered_json& j);
};

}  // namespace weaklie
