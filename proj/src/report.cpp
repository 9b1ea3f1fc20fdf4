#include "weaklie/report.hpp"

#include "weaklie/errors.hpp"

namespace weaklie {

bool Report::pass() const {
  for (const auto& c : commands)
    if (!c.pass) return false;
  return true;
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["seed"] = seed;
  j["commands"] = nlohmann::ordered_json::array();
  for (const auto& c : commands) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["inputs"] = c.inputs;
    cj["findings"] = c.findings;
    cj["residual_max"] = c.residual_max;
    cj["pass"] = c.pass;
    j["commands"].push_back(cj);
  }
  j["pass"] = pass();
  return j;
}

Report Report::from_json(const nlohmann::ordered_json& j) {
  Report r;
  try {
    r.version = j.at("version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& cj : j.at("commands")) {
      CommandResult c;
      c.name = cj.at("name").get<std::string>();
      c.inputs = cj.at("inputs");
      c.findings = cj.at("findings");
      c.residual_max = cj.at("residual_max").get<double>();
      c.pass = cj.at("pass").get<bool>();
      r.commands.push_back(std::move(c));
    }
    if (j.at("pass").get<bool>() != r.pass()) throw Error("report: overall pass disagrees with its commands");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  return r;
}

}  // namespace weaklie
