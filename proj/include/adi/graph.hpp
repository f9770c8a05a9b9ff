#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "adi/core.hpp"
#include "adi/fsm.hpp"
#include "adi/scope.hpp"
#include "adi/timeutil.hpp"

namespace adi {

struct Evidence {
  std::string id;
  double raw_score = 0.0;
  Formality formality = Formality::F0;
  Scope scope;
  Verification method = Verification::SelfReported;
  EvidenceRole role = EvidenceRole::Other;
  Timestamp collected_at = 0;
  Timestamp valid_until = 0;
  std::string provenance;

  bool llm_generated() const {
    return provenance.find("llm-generated") != std::string::npos;
  }
};

enum class ClaimStatus : std::uint8_t { Active = 0, Stale, Discarded, Contradicted };

std::string_view claim_status_name(ClaimStatus s);
ClaimStatus parse_claim_status(std::string_view token);

// One finalized inference step in a claim's promotion history; replayed into
// DRR step lists at ratification time.
struct HistoryStep {
  std::string mode;  // "abduction" | "deduction" | "induction"
  Layer layer = Layer::L0;
  std::vector<std::string> evidence_ids;
  std::string actor_id;
  Timestamp at = 0;
};

struct ClaimNode {
  std::string id;
  std::string statement;
  Layer layer = Layer::L0;
  Formality formality = Formality::F0;
  Scope scope;
  ActorId proposer;
  std::set<std::string> evidence_refs;
  std::set<std::string> dependency_refs;
  std::set<std::string> contradiction_refs;
  ClaimStatus status = ClaimStatus::Active;
  double cached_r_eff = 0.0;
  Phase phase = Phase::Abduction;
  std::vector<HistoryStep> history;

  // A BOTTOM scope matches nothing, so every evidence item is excluded.
  bool unmatchable() const { return scope.is_bottom(); }
};

// Evidence adjustment pipeline (congruence gate, verification multiplier,
// temporal decay, congruence penalty with floor at 0). EXCLUDED is a value,
// not an error.
struct AdjustedEvidence {
  bool excluded = false;
  double value = 0.0;
  Congruence match = Congruence::None;
  double decay = 1.0;
  bool capped = false;  // llm-generated faithfulness cap applied
};

AdjustedEvidence adjust_evidence(const Evidence& e, const Scope& claim_scope,
                                 Timestamp now, const Config& cfg);

// Decay factor: 1 up to valid_until, linear ramp to 0 across the grace
// period, 0 after. grace == 0 degenerates to a binary cutoff.
double decay_factor(Timestamp now, Timestamp valid_until, Timestamp grace);

// Two-tier evidence aggregation -------------------------------------------

struct GateOutcome {
  double score = 0.0;
  bool passed = true;
};

struct TwoTierInput {
  std::vector<GateOutcome> gates;
  std::vector<double> quality;
  std::vector<double> performance;
  std::vector<double> other;

  bool empty() const {
    return gates.empty() && quality.empty() && performance.empty() &&
           other.empty();
  }
};

struct TwoTierResult {
  double overall = 0.0;
  std::optional<double> gate;
  std::optional<double> quality;
  std::optional<double> performance;
  std::optional<double> other;
};

// Tier 1: gates -> min (failed gate scores 0); quality -> probabilistic sum;
// performance -> conservative OWA; other -> min. Tier 2: min across roles.
// Throws EmptyEvidence when every role group is empty.
TwoTierResult two_tier_aggregate(const TwoTierInput& input);

// Probabilistic sum 1 - prod(1 - s_i); the quality-role combiner.
double probabilistic_sum(std::span<const double> scores);

// Conservative OWA: ascending sort, weight 2(n-i+1)/(n(n+1)) on the i-th
// smallest (heaviest weight on the weakest input).
double conservative_owa(std::span<const double> scores);

// Effective-reliability breakdown for score explanations ------------------

enum class TermKind : std::uint8_t {
  EvidenceTerm = 0,
  DependencyTerm,
  LayerCeiling,
  FormalityCeiling,
};

struct ReffTerm {
  TermKind kind = TermKind::EvidenceTerm;
  std::string ref;  // evidence or claim id; empty for ceilings
  double value = 1.0;
  bool excluded = false;
  Congruence match = Congruence::CL3;
  double penalty = 0.0;
};

struct ReffBreakdown {
  std::string claim_id;
  double r_eff = 0.0;
  std::vector<ReffTerm> terms;
  // Index of the dominating (minimal) non-excluded term; ties resolve to the
  // first in listed order (evidence, dependencies, layer, formality).
  std::size_t dominating = 0;
};

enum class PropagateMode : std::uint8_t { Full = 0, Incremental };

struct InspectRow {
  std::string id;
  bool is_evidence = false;
  int depth = 0;
  // Claims:
  Layer layer = Layer::L0;
  ClaimStatus status = ClaimStatus::Active;
  double r_eff = 0.0;
  // Evidence:
  double raw_score = 0.0;
  EvidenceRole role = EvidenceRole::Other;
};

// Claims, evidence and dependencies as an acyclic graph with cached
// weakest-link reliability. Single-writer / multi-reader: mutating calls are
// serialized and atomic with respect to readers; snapshot() hands back a
// consistent copy for lock-free inspection.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;
  KnowledgeGraph(const KnowledgeGraph& other);
  KnowledgeGraph& operator=(const KnowledgeGraph& other);

  // Clock ------------------------------------------------------------------
  Timestamp clock() const;
  // Changing the clock invalidates every cached score (decay is
  // time-dependent).
  void set_clock(Timestamp now);

  // Structure --------------------------------------------------------------
  void add_claim(ClaimNode claim);
  void add_evidence(Evidence evidence);
  void attach_evidence(const std::string& claim_id,
                       const std::string& evidence_id);
  void link_dependency(const std::string& from, const std::string& to);
  void declare_contradiction(const std::string& a, const std::string& b);
  void set_status(const std::string& claim_id, ClaimStatus status);

  bool has_claim(const std::string& id) const;
  bool has_evidence(const std::string& id) const;
  ClaimNode claim(const std::string& id) const;
  Evidence evidence(const std::string& id) const;
  std::vector<std::string> claim_ids() const;     // sorted
  std::vector<std::string> evidence_ids() const;  // sorted
  std::size_t claim_count() const;
  std::size_t evidence_count() const;

  // Scoring ----------------------------------------------------------------
  double effective_reliability(const std::string& claim_id, const Config& cfg,
                               Timestamp now);
  ReffBreakdown explain(const std::string& claim_id, const Config& cfg,
                        Timestamp now);
  void propagate(const Config& cfg, Timestamp now, PropagateMode mode);
  // Cached value without recomputation; requires a prior propagate.
  double cached_score(const std::string& claim_id) const;

  // Atomic perturbation: update one evidence raw score and repropagate
  // incrementally in a single writer step.
  void update_evidence_score(const std::string& evidence_id, double raw_score,
                             const Config& cfg, Timestamp now);

  // Staleness --------------------------------------------------------------
  // Flags claims whose qualifying evidence has expired members (plus their
  // transitive dependents), demotes L2 claims with no live qualifying
  // evidence to L1, and repropagates. Returns the sorted flagged ids.
  std::vector<std::string> sweep_stale(const Config& cfg, Timestamp now);

  // Inspection -------------------------------------------------------------
  // Breadth-first over dependency and evidence edges, deduplicated, ordered
  // by depth then lexicographic id.
  std::vector<InspectRow> inspect_dependencies(const std::string& claim_id) const;

  // Persistence (line-delimited JSON, one entity per line) ------------------
  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  static KnowledgeGraph load(std::istream& in);
  static KnowledgeGraph load_file(const std::string& path);

  KnowledgeGraph snapshot() const;

  // Internal mutation hooks for the lifecycle operations (fsm.cpp); they
  // respect the same locking discipline as the public mutators.
  struct LifecycleAccess;

 private:
  struct State {
    std::map<std::string, ClaimNode> claims;
    std::map<std::string, Evidence> evidence;
    // Reverse dependency index: claim -> claims that depend on it.
    std::map<std::string, std::set<std::string>> dependents;
    // Evidence -> claims referencing it.
    std::map<std::string, std::set<std::string>> evidence_users;
    std::set<std::string> dirty;
    Timestamp clock = 0;
  };

  // Unlocked internals; public methods take the lock and delegate.
  ClaimNode& claim_ref(const std::string& id);
  const ClaimNode& claim_ref(const std::string& id) const;
  Evidence& evidence_ref(const std::string& id);
  const Evidence& evidence_ref(const std::string& id) const;
  bool would_cycle(const std::string& from, const std::string& to) const;
  void mark_dirty(const std::string& claim_id);
  void mark_all_dirty();
  void set_clock_unlocked(Timestamp now);
  std::vector<std::string> topological_order(
      const std::set<std::string>& restrict_to, bool restricted) const;
  double compute_r_eff(const ClaimNode& c, const Config& cfg) const;
  void propagate_unlocked(const Config& cfg, PropagateMode mode);
  std::set<std::string> dependents_closure(
      const std::set<std::string>& seeds) const;
  ReffBreakdown explain_unlocked(const std::string& claim_id,
                                 const Config& cfg) const;
  void validate_integrity() const;

  mutable std::shared_mutex mu_;
  State st_;

  friend struct LifecycleAccess;
};

}  // namespace adi
