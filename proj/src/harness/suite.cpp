#include "adi/harness/suite.hpp"

#include <algorithm>

#include "adi/error.hpp"
#include "adi/harness/oracles.hpp"
#include "json.hpp"
#include "registry.hpp"

namespace adi::harness {

std::map<std::string, double> Env::score_all(KnowledgeGraph& g,
                                             Timestamp now) const {
  if (inject == Inject::MeanReff) {
    return mean_mutant_score_all(g, cfg, now);
  }
  g.propagate(cfg, now, PropagateMode::Full);
  std::map<std::string, double> out;
  for (const auto& id : g.claim_ids()) out[id] = g.cached_score(id);
  return out;
}

std::vector<Property> build_registry(const Env& env) {
  std::vector<Property> props;
  register_reff_properties(props, env);
  register_scope_properties(props, env);
  register_fsm_properties(props, env);
  register_topology_properties(props, env);
  register_inspector_properties(props, env);
  register_fuzz_properties(props, env);
  return props;
}

std::vector<std::string> fuzz_target_names() {
  Env env;
  std::vector<Property> props;
  register_fuzz_properties(props, env);
  std::vector<std::string> names;
  names.reserve(props.size());
  for (const auto& p : props) names.push_back(p.name);
  return names;
}

namespace {

long default_cases_for(const Config& cfg, const std::string& category) {
  if (category == "r_eff_calculator") return cfg.pbt_cases.r_eff_calculator;
  if (category == "scope_algebra") return cfg.pbt_cases.scope_algebra;
  if (category == "epistemic_fsm") return cfg.pbt_cases.epistemic_fsm;
  if (category == "graph_topology") return cfg.pbt_cases.graph_topology;
  if (category == "dependency_inspector") {
    return cfg.pbt_cases.dependency_inspector;
  }
  return cfg.pbt_cases.fuzz;
}

struct CaseLoopResult {
  long violations = 0;  // ForAll: failing cases; Exists: witnessing cases
  long first_index = -1;
};

CaseLoopResult run_cases(const Property& prop, long cases, std::uint64_t seed,
                         bool parallel, bool want_witness) {
  const std::uint64_t prop_key = fnv1a64(prop.name);
  long hits = 0;
  long first = cases;  // sentinel past the end

  if (parallel && !prop.serial_only) {
#pragma omp parallel for schedule(static) reduction(+ : hits) \
    reduction(min : first)
    for (long i = 0; i < cases; ++i) {
      const bool ok = prop.run(mix_seed(seed, prop_key, static_cast<std::uint64_t>(i)));
      const bool hit = want_witness ? ok : !ok;
      if (hit) {
        ++hits;
        if (i < first) first = i;
      }
    }
  } else {
    for (long i = 0; i < cases; ++i) {
      const bool ok = prop.run(mix_seed(seed, prop_key, static_cast<std::uint64_t>(i)));
      const bool hit = want_witness ? ok : !ok;
      if (hit) {
        ++hits;
        if (i < first) first = i;
      }
    }
  }

  CaseLoopResult res;
  res.violations = hits;
  res.first_index = (first == cases) ? -1 : first;
  return res;
}

}  // namespace

SuiteReport run_suite(const SuiteParams& params) {
  bool known = params.category == "all";
  for (const char* c : kCategories) {
    if (params.category == c) known = true;
  }
  if (!known) {
    raise(Err::ParseError, "unknown suite category '" + params.category + "'");
  }
  if (params.cases < 0) {
    raise(Err::RangeViolation, "case count must be >= 1 (or 0 for defaults)");
  }

  Env env;
  env.cfg = params.config;
  env.inject = params.inject;

  SuiteReport report;
  report.seed = params.seed;
  report.runner = params.runner == RunnerKind::Parallel ? "parallel" : "serial";
  report.inject = params.inject == Inject::None ? "none" : "mean_r_eff";
  report.note =
      "property names are this implementation's enumeration of the six "
      "inventory categories";

  std::map<std::string, CategorySummary> cats;
  for (const char* c : kCategories) {
    cats[c].name = c;
  }

  const std::vector<Property> registry = build_registry(env);
  for (const Property& prop : registry) {
    if (params.category != "all" && prop.category != params.category) continue;

    const long requested = params.cases > 0
                               ? params.cases
                               : default_cases_for(env.cfg, prop.category);
    const long cases = prop.scaled_cases(requested);
    const bool parallel = params.runner == RunnerKind::Parallel;
    const bool exists = prop.mode == PropMode::Exists;

    const CaseLoopResult loop =
        run_cases(prop, cases, params.seed, parallel, exists);

    PropertyResult res;
    res.name = prop.name;
    res.category = prop.category;
    res.mode = prop.mode;
    res.cases_run = cases;

    const std::uint64_t prop_key = fnv1a64(prop.name);
    if (exists) {
      if (loop.violations > 0) {
        res.pass = true;
        res.failures = 0;
        res.witness = prop.describe(
            mix_seed(params.seed, prop_key,
                     static_cast<std::uint64_t>(loop.first_index)));
      } else {
        res.pass = false;
        res.failures = 1;
        res.counterexample =
            "no witness found in " + std::to_string(cases) + " cases";
      }
    } else {
      res.failures = loop.violations;
      res.pass = loop.violations == 0;
      if (!res.pass) {
        res.counterexample = prop.describe(
            mix_seed(params.seed, prop_key,
                     static_cast<std::uint64_t>(loop.first_index)));
      }
    }

    CategorySummary& cat = cats[prop.category];
    cat.properties_defined += 1;
    cat.cases_run += res.cases_run;
    if (!res.pass) {
      cat.failures += 1;
      if (!cat.first_counterexample && res.counterexample) {
        cat.first_counterexample = res.counterexample;
      }
      report.all_pass = false;
    }
    if (prop.category == "fuzz") {
      report.total_fuzz_targets += 1;
    } else {
      report.total_properties += 1;
    }
    report.properties.push_back(std::move(res));
  }

  for (const char* c : kCategories) {
    if (params.category == "all" || params.category == c) {
      report.categories.push_back(cats[c]);
    }
  }
  return report;
}

std::string SuiteReport::to_json(int indent) const {
  nlohmann::json j;
  j["seed"] = seed;
  j["runner"] = runner;
  j["inject"] = inject;
  j["note"] = note;
  j["total_properties"] = total_properties;
  j["total_fuzz_targets"] = total_fuzz_targets;
  j["all_pass"] = all_pass;
  j["categories"] = nlohmann::json::array();
  for (const auto& c : categories) {
    nlohmann::json e;
    e["name"] = c.name;
    e["properties_defined"] = c.properties_defined;
    e["cases_run"] = c.cases_run;
    e["failures"] = c.failures;
    if (c.first_counterexample) {
      e["first_counterexample"] = *c.first_counterexample;
    }
    j["categories"].push_back(std::move(e));
  }
  j["properties"] = nlohmann::json::array();
  for (const auto& p : properties) {
    nlohmann::json e;
    e["name"] = p.name;
    e["category"] = p.category;
    e["mode"] = p.mode == PropMode::ForAll ? "forall" : "exists";
    e["cases_run"] = p.cases_run;
    e["failures"] = p.failures;
    e["pass"] = p.pass;
    if (p.counterexample) e["counterexample"] = *p.counterexample;
    if (p.witness) e["witness"] = *p.witness;
    j["properties"].push_back(std::move(e));
  }
  return indent >= 0 ? j.dump(indent) : j.dump();
}

}  // namespace adi::harness
