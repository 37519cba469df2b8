#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gentle/chain.hpp"
#include "gentle/crew.hpp"
#include "gentle/funcomplex.hpp"
#include "gentle/group.hpp"
#include "gentle/module.hpp"

namespace gentle::cli {

using json = nlohmann::ordered_json;

// crew JSON: {"basepoint": label, "simplices": {"q": [{"name", "faces":
// [{"word": [...], "target": name}, ...]}]}}
simp::CrewPtr crew_from_json(const json& j, const std::string& name);
json crew_to_json(const simp::Crew& c);

// chain complex JSON: {"p", "ranks": {"q": n}, "d": {"q": row-major matrix}}
ch::ChainComplex complex_from_json(const json& j);
json complex_to_json(const ch::ChainComplex& c);

// complex map JSON: {"f": {"q": row-major matrix}}; shapes come from the
// endpoints
ch::ComplexMap complex_map_from_json(const json& j, const ch::ChainComplex& src, const ch::ChainComplex& dst);
json complex_map_to_json(const ch::ComplexMap& m);

// invariant JSON: {"values": {class-representative-name: int}}
std::vector<uint32_t> invariant_from_json(const json& j, const simp::Pi0& classes);
json invariant_to_json(const simp::Pi0& classes, const std::vector<uint32_t>& values);

// group JSON: {"cyclic_orders": [...]} or {"elements": [...], "table": [[...]]}
grp::GroupPtr group_from_json(const json& j);
// group function JSON: {"p": p, "values": {element-label: int}}
grp::GroupFunction group_function_from_json(const json& j, grp::GroupPtr g);

/// Built-in reference grammar: point | sphere:n | em:p,n | wedge:(r,r,...) |
/// power:(r,n) | cyl:r | file:path.
struct ResolvedRef {
  simp::CrewPtr crew;        // crew refs
  simp::ModulePtr module;    // module refs
  std::string canonical;

  bool is_module() const { return module != nullptr; }
  simp::Target target() const;
};

ResolvedRef resolve_ref(const std::string& ref, std::size_t module_cap, const Caps& caps = {});

/// One named verdict with machine-readable details.
struct CheckResult {
  std::string name;
  bool pass = false;
  json details;
  long ms = 0;
};

/// Command report. The machine-readable rendering is deterministic given the
/// inputs, seed, and caps; wall-clock timings only appear in the
/// human-readable text.
struct Report {
  std::string command;
  uint64_t seed = 0;
  Caps caps;
  std::vector<CheckResult> checks;

  bool all_pass() const;
  json to_json() const;        // no timings
  std::string to_text() const;  // with timings
};

json caps_to_json(const Caps& c);

enum ExitCode : int {
  exit_ok = 0,
  exit_check_failure = 2,
  exit_cap_exceeded = 3,
  exit_input_error = 4,
};

}  // namespace gentle::cli
