#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gentle/invariants.hpp"
#include "gentle/io.hpp"
#include "gentle/keys.hpp"

namespace gentle::cli {

struct SuiteOptions {
  uint64_t seed = 0;
  uint32_t trials = 50;
  uint32_t membership_trials = 100;
  long long window_lo = -20;
  long long window_hi = 20;
  Caps caps;
};

std::vector<std::string> suite_names();
bool is_suite_name(const std::string& name);

/// The default catalog driving the theorem-level checks.
std::vector<std::string> catalog_crew_refs();
std::vector<std::string> catalog_target_refs();
std::size_t catalog_module_cap(const Caps& caps);

void suite_lemma3(Report& report, const SuiteOptions& opt);
void suite_lemma7(Report& report, const SuiteOptions& opt);
void suite_lemma4(Report& report, const SuiteOptions& opt);
void suite_lemma12(Report& report, const SuiteOptions& opt);
void suite_theorem12(Report& report, const SuiteOptions& opt);

Report run_suite(const std::string& name, const SuiteOptions& opt);

/// Dold-Kan round trip on the materialized range via the identity-surjection
/// embedding.
bool dold_kan_round_trip_ok(const simp::SimplicialModule& m, std::size_t up_to);

}  // namespace gentle::cli
