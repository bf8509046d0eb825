#pragma once

#include <json.hpp>
#include <string>

#include "malab/conditions.hpp"
#include "malab/problem.hpp"

namespace malab {

using ordered_json = nlohmann::ordered_json;

// Parses the problem-spec schema
//   {"domain":{...},"psi":{...},"gamma0":...,"phi":{...},"flow":{...}}
// with named built-ins and polynomial coefficient tables only (no expression
// language).
ProblemSpec parse_problem_spec(const ordered_json& j);
ProblemSpec load_problem_spec(const std::string& path);

ordered_json report_to_json(const ConditionReport& rep);

// FNV-1a 64-bit content hash, hex encoded; used as the spec digest.
std::string content_digest(const std::string& content);

// Formats a double with 17 significant digits (round-trip exact).
std::string fmt17(double v);

struct RunManifest {
  std::string command;
  std::string spec_digest;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;

  ordered_json to_json() const;
};

}  // namespace malab
