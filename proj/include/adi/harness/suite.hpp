#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adi/core.hpp"
#include "adi/graph.hpp"
#include "adi/harness/property.hpp"

namespace adi::harness {

inline constexpr const char* kCategories[] = {
    "r_eff_calculator", "scope_algebra",        "epistemic_fsm",
    "graph_topology",   "dependency_inspector", "fuzz",
};
constexpr int kCategoryCount = 6;

enum class RunnerKind { Serial, Parallel };
enum class Inject { None, MeanReff };

struct SuiteParams {
  std::string category = "all";  // "all" or one of kCategories
  long cases = 0;                // 0 = per-category default from config
  std::uint64_t seed = 42;
  RunnerKind runner = RunnerKind::Parallel;
  Inject inject = Inject::None;
  Config config;
};

struct PropertyResult {
  std::string name;
  std::string category;
  PropMode mode = PropMode::ForAll;
  long cases_run = 0;
  long failures = 0;  // violating cases (ForAll) or 1 when no witness (Exists)
  bool pass = true;
  std::optional<std::string> counterexample;  // shrunk, on failure
  std::optional<std::string> witness;         // shrunk, for passing Exists
};

struct CategorySummary {
  std::string name;
  long properties_defined = 0;
  long cases_run = 0;
  long failures = 0;  // failing properties
  std::optional<std::string> first_counterexample;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::string runner;
  std::string inject;
  std::string note;
  std::vector<CategorySummary> categories;
  std::vector<PropertyResult> properties;
  long total_properties = 0;
  long total_fuzz_targets = 0;
  bool all_pass = true;

  std::string to_json(int indent = -1) const;
};

// Shared context for property registration. score_all is the function under
// test: the engine propagation by default, the mean mutant under injection.
struct Env {
  Config cfg;
  Inject inject = Inject::None;

  std::map<std::string, double> score_all(KnowledgeGraph& g,
                                          Timestamp now) const;
};

SuiteReport run_suite(const SuiteParams& params);

// The 16 named fuzz targets, in registration order.
std::vector<std::string> fuzz_target_names();

// Full property registry for a given environment (all categories).
std::vector<Property> build_registry(const Env& env);

}  // namespace adi::harness
