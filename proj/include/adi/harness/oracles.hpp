#pragma once

// Independent oracles for the derived expected values. Everything here
// re-implements the checked semantics from scratch (own congruence rules, own
// pipeline arithmetic, own traversals) and never calls into the engine's
// scoring path.

#include <map>
#include <set>
#include <span>
#include <string>

#include "adi/core.hpp"
#include "adi/graph.hpp"
#include "adi/scope.hpp"

namespace adi::harness {

// Brute-force congruence rule table.
Congruence oracle_match_level(const Scope& claim_scope,
                              const Scope& evidence_scope);

// Subsumption order: a <= b iff every constraint of b holds in a.
bool oracle_scope_leq(const Scope& a, const Scope& b);

// Full recursive recomputation of every claim's effective reliability.
std::map<std::string, double> oracle_score_all(const KnowledgeGraph& graph,
                                               const Config& cfg,
                                               Timestamp now);

// Adjusted evidence value (or negative when excluded) by direct arithmetic.
double oracle_adjust(const Evidence& e, const Scope& claim_scope,
                     Timestamp now, const Config& cfg, bool& excluded);

// Fault injection: Eq. 1 with the arithmetic mean in place of min. Used to
// demonstrate the suite detects WLNK violations.
std::map<std::string, double> mean_mutant_score_all(const KnowledgeGraph& graph,
                                                    const Config& cfg,
                                                    Timestamp now);

// Direct-summation combiners for the two-tier roles.
double oracle_probabilistic_sum(std::span<const double> scores);
double oracle_conservative_owa(std::span<const double> scores);

// Reachability over dependency edges (claims only), depth-first.
std::set<std::string> oracle_dfs_claims(const KnowledgeGraph& graph,
                                        const std::string& root);

// Shortest-path depths over dependency+evidence edges by iterative
// relaxation (not BFS).
std::map<std::string, int> oracle_depths(const KnowledgeGraph& graph,
                                         const std::string& root);

}  // namespace adi::harness
