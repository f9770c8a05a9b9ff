#include "adi/harness/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace adi::harness {

Congruence oracle_match_level(const Scope& claim_scope,
                              const Scope& evidence_scope) {
  if (claim_scope.is_bottom() || evidence_scope.is_bottom()) {
    return Congruence::None;
  }
  const auto& a = claim_scope.constraints();
  const auto& b = evidence_scope.constraints();

  int shared_agree = 0;
  int shared_conflict = 0;
  int only_a = 0;
  int only_b = 0;
  for (const auto& [dim, value] : a) {
    auto it = b.find(dim);
    if (it == b.end()) {
      ++only_a;
    } else if (it->second == value) {
      ++shared_agree;
    } else {
      ++shared_conflict;
    }
  }
  for (const auto& [dim, value] : b) {
    (void)value;
    if (a.find(dim) == a.end()) ++only_b;
  }

  if (shared_conflict == 0 && only_a == 0 && only_b == 0) return Congruence::CL3;
  if (shared_conflict > 0) {
    return shared_agree > 0 ? Congruence::CL1 : Congruence::None;
  }
  if (only_a == 0 || only_b == 0) return Congruence::CL2;  // one side subsumes
  return Congruence::CL1;
}

bool oracle_scope_leq(const Scope& a, const Scope& b) {
  if (a.is_bottom()) return true;
  if (b.is_bottom()) return false;
  const auto& ac = a.constraints();
  for (const auto& [dim, value] : b.constraints()) {
    auto it = ac.find(dim);
    if (it == ac.end() || it->second != value) return false;
  }
  return true;
}

double oracle_adjust(const Evidence& e, const Scope& claim_scope,
                     Timestamp now, const Config& cfg, bool& excluded) {
  const Congruence m = oracle_match_level(claim_scope, e.scope);
  if (m == Congruence::None) {
    excluded = true;
    return -1.0;
  }
  excluded = false;
  double v = e.raw_score;
  switch (e.method) {
    case Verification::SelfReported:
      v *= cfg.verification_multiplier[0];
      break;
    case Verification::ScriptAttached:
      v *= cfg.verification_multiplier[1];
      break;
    case Verification::ExternallyReviewed:
      v *= cfg.verification_multiplier[2];
      break;
    case Verification::ExecutedVerified:
      v *= cfg.verification_multiplier[3];
      break;
  }
  const Timestamp grace = cfg.grace_days * kSecondsPerDay;
  double decay;
  if (now <= e.valid_until) {
    decay = 1.0;
  } else if (grace > 0 && now < e.valid_until + grace) {
    decay = 1.0 - static_cast<double>(now - e.valid_until) /
                      static_cast<double>(grace);
  } else {
    decay = 0.0;
  }
  v *= decay;
  double penalty = 0.0;
  if (m == Congruence::CL2) penalty = cfg.penalty_cl2;
  if (m == Congruence::CL1) penalty = cfg.penalty_cl1;
  v = v - penalty;
  if (v < 0.0) v = 0.0;
  if (cfg.llm_generated_cap &&
      e.provenance.find("llm-generated") != std::string::npos &&
      v > *cfg.llm_generated_cap) {
    v = *cfg.llm_generated_cap;
  }
  return v;
}

namespace {

// Shared recursive evaluator; `combine` folds the collected terms.
std::map<std::string, double> recursive_score_all(
    const KnowledgeGraph& graph, const Config& cfg, Timestamp now,
    const std::function<double(const std::vector<double>&)>& combine) {
  std::map<std::string, double> memo;
  std::function<double(const std::string&)> eval =
      [&](const std::string& id) -> double {
    auto hit = memo.find(id);
    if (hit != memo.end()) return hit->second;
    const ClaimNode c = graph.claim(id);
    std::vector<double> terms;
    for (const auto& eid : c.evidence_refs) {
      bool excluded = false;
      double v = oracle_adjust(graph.evidence(eid), c.scope, now, cfg, excluded);
      if (!excluded) terms.push_back(v);
    }
    for (const auto& did : c.dependency_refs) {
      const ClaimNode dep = graph.claim(did);
      const Congruence m = oracle_match_level(c.scope, dep.scope);
      if (m == Congruence::None) {
        terms.push_back(0.0);
        continue;
      }
      double penalty = 0.0;
      if (m == Congruence::CL2) penalty = cfg.penalty_cl2;
      if (m == Congruence::CL1) penalty = cfg.penalty_cl1;
      double t = eval(did) - penalty;
      if (t < 0.0) t = 0.0;
      terms.push_back(t);
    }
    terms.push_back(cfg.layer_ceiling[static_cast<int>(c.layer)]);
    terms.push_back(cfg.formality_ceiling[static_cast<int>(c.formality)]);
    const double r = combine(terms);
    memo[id] = r;
    return r;
  };
  for (const auto& id : graph.claim_ids()) eval(id);
  return memo;
}

}  // namespace

std::map<std::string, double> oracle_score_all(const KnowledgeGraph& graph,
                                               const Config& cfg,
                                               Timestamp now) {
  return recursive_score_all(graph, cfg, now, [](const std::vector<double>& t) {
    double m = 1.0;
    for (double v : t) m = std::min(m, v);
    return m;
  });
}

std::map<std::string, double> mean_mutant_score_all(const KnowledgeGraph& graph,
                                                    const Config& cfg,
                                                    Timestamp now) {
  return recursive_score_all(graph, cfg, now, [](const std::vector<double>& t) {
    double sum = 0.0;
    for (double v : t) sum += v;
    double m = t.empty() ? 1.0 : sum / static_cast<double>(t.size());
    return std::clamp(m, 0.0, 1.0);
  });
}

double oracle_probabilistic_sum(std::span<const double> scores) {
  double product = 1.0;
  for (double s : scores) product *= (1.0 - s);
  return 1.0 - product;
}

double oracle_conservative_owa(std::span<const double> scores) {
  std::vector<double> asc(scores.begin(), scores.end());
  std::sort(asc.begin(), asc.end());
  const std::size_t n = asc.size();
  double acc = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double w = 2.0 * static_cast<double>(n - i + 1) /
                     (static_cast<double>(n) * static_cast<double>(n + 1));
    acc += w * asc[i - 1];
  }
  return acc;
}

std::set<std::string> oracle_dfs_claims(const KnowledgeGraph& graph,
                                        const std::string& root) {
  std::set<std::string> seen;
  std::vector<std::string> stack{root};
  while (!stack.empty()) {
    std::string cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    const ClaimNode c = graph.claim(cur);
    for (const auto& dep : c.dependency_refs) stack.push_back(dep);
  }
  return seen;
}

std::map<std::string, int> oracle_depths(const KnowledgeGraph& graph,
                                         const std::string& root) {
  // Bellman-style relaxation over (claim->dependency) and (claim->evidence)
  // edges until fixpoint; deliberately not a BFS.
  std::map<std::string, int> depth;
  depth[root] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [id, d] : std::map<std::string, int>(depth)) {
      // Only claims expand; evidence ids never appear as claims.
      if (!graph.has_claim(id)) continue;
      const ClaimNode c = graph.claim(id);
      for (const auto& dep : c.dependency_refs) {
        auto it = depth.find(dep);
        if (it == depth.end() || it->second > d + 1) {
          depth[dep] = d + 1;
          changed = true;
        }
      }
      for (const auto& eid : c.evidence_refs) {
        const std::string key = "ev:" + eid;
        auto it = depth.find(key);
        if (it == depth.end() || it->second > d + 1) {
          depth[key] = d + 1;
          changed = true;
        }
      }
    }
  }
  return depth;
}

}  // namespace adi::harness
