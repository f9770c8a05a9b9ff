#include "adi/fsm.hpp"

#include <mutex>

#include "adi/drr.hpp"
#include "adi/error.hpp"
#include "adi/graph.hpp"
#include "lifecycle_access.hpp"

namespace adi {

namespace {

constexpr std::string_view kPhaseNames[] = {"idle",      "abduction",
                                            "deduction", "induction",
                                            "ratified",  "operation"};
constexpr std::string_view kEventNames[] = {"start",    "hypothesize", "verify",
                                            "validate", "ratify",      "reset",
                                            "deploy"};

}  // namespace

std::string_view phase_name(Phase p) { return kPhaseNames[static_cast<int>(p)]; }
std::string_view event_name(Event e) { return kEventNames[static_cast<int>(e)]; }

Phase parse_phase(std::string_view token) {
  for (int i = 0; i < kPhaseCount; ++i) {
    if (kPhaseNames[i] == token) return static_cast<Phase>(i);
  }
  raise(Err::ParseError, "unknown phase: '" + std::string(token) + "'");
}

Event parse_event(std::string_view token) {
  for (int i = 0; i < kEventCount; ++i) {
    if (kEventNames[i] == token) return static_cast<Event>(i);
  }
  raise(Err::ParseError, "unknown event: '" + std::string(token) + "'");
}

bool transition_defined(Phase current, Event event) {
  switch (event) {
    case Event::Start:
      return current == Phase::Idle;
    case Event::Hypothesize:
      return current == Phase::Abduction;
    case Event::Verify:
      return current == Phase::Deduction;
    case Event::Validate:
      return current == Phase::Induction;
    case Event::Deploy:
      return current == Phase::Ratified;
    case Event::Reset:
      // OPERATION is intentionally terminal; every other phase resets.
      return current != Phase::Operation;
    case Event::Ratify:
      // Reserved for the ratify() operation; no table entry.
      return false;
  }
  return false;
}

Phase transition(Phase current, Event event) {
  if (!transition_defined(current, event)) {
    raise(Err::IllegalTransition,
          "no transition for (" + std::string(phase_name(current)) + ", " +
              std::string(event_name(event)) + ")",
          std::string(phase_name(current)) + "," +
              std::string(event_name(event)));
  }
  switch (event) {
    case Event::Start:
      return Phase::Abduction;
    case Event::Hypothesize:
      return Phase::Deduction;
    case Event::Verify:
      return Phase::Induction;
    case Event::Validate:
      return Phase::Ratified;
    case Event::Deploy:
      return Phase::Operation;
    case Event::Reset:
      return Phase::Idle;
    case Event::Ratify:
      break;
  }
  raise(Err::IllegalTransition, "unreachable");
}

namespace {

constexpr std::string_view kActorKindNames[] = {"generator", "verifier",
                                                "human"};

}  // namespace

std::string_view actor_kind_name(ActorKind k) {
  return kActorKindNames[static_cast<int>(k)];
}

ActorKind parse_actor_kind(std::string_view token) {
  for (int i = 0; i < 3; ++i) {
    if (kActorKindNames[i] == token) return static_cast<ActorKind>(i);
  }
  raise(Err::ParseError, "unknown actor kind: '" + std::string(token) + "'");
}

// ---------------------------------------------------------------------------
// Lifecycle operations
// ---------------------------------------------------------------------------

void KnowledgeGraph::LifecycleAccess::apply_promotion(
    KnowledgeGraph& g, const std::string& claim_id, Layer layer, Phase phase,
    HistoryStep step, const std::vector<std::string>& evidence_ids,
    const Config& cfg) {
  std::unique_lock lk(g.mu_);
  ClaimNode& c = g.claim_ref(claim_id);
  for (const auto& eid : evidence_ids) {
    g.evidence_ref(eid);
    if (c.evidence_refs.insert(eid).second) {
      g.st_.evidence_users[eid].insert(claim_id);
    }
  }
  c.layer = layer;
  c.phase = phase;
  c.status = ClaimStatus::Active;
  c.history.push_back(std::move(step));
  g.mark_dirty(claim_id);
  g.propagate_unlocked(cfg, PropagateMode::Incremental);
}

void KnowledgeGraph::LifecycleAccess::set_phase(KnowledgeGraph& g,
                                                const std::string& claim_id,
                                                Phase phase) {
  std::unique_lock lk(g.mu_);
  g.claim_ref(claim_id).phase = phase;
}

void KnowledgeGraph::LifecycleAccess::append_baseline_history(
    KnowledgeGraph& g, const std::string& claim_id, HistoryStep step) {
  std::unique_lock lk(g.mu_);
  g.claim_ref(claim_id).history.push_back(std::move(step));
}

std::string propose(KnowledgeGraph& graph, std::string statement, Scope scope,
                    Formality formality, ActorId proposer, std::string id) {
  if (id.empty()) {
    std::size_t k = graph.claim_count() + 1;
    do {
      id = "c-" + std::to_string(k++);
    } while (graph.has_claim(id));
  }
  ClaimNode c;
  c.id = id;
  c.statement = std::move(statement);
  c.layer = Layer::L0;
  c.formality = formality;
  c.scope = std::move(scope);
  c.proposer = std::move(proposer);
  c.status = ClaimStatus::Active;
  c.phase = transition(Phase::Idle, Event::Start);
  HistoryStep step;
  step.mode = "abduction";
  step.layer = Layer::L0;
  step.actor_id = c.proposer.id;
  step.at = graph.clock();
  c.history.push_back(std::move(step));
  graph.add_claim(std::move(c));
  return id;
}

ClaimNode promote(KnowledgeGraph& graph, const PromotionRequest& req,
                  const Config& cfg) {
  const ClaimNode before = graph.claim(req.claim_id);

  const int current = static_cast<int>(before.layer);
  const int target = static_cast<int>(req.target);
  if (target != current + 1) {
    raise(Err::LayerSkip,
          "promotion of '" + req.claim_id + "' must target " +
              (current < kLayerCount - 1
                   ? std::string(layer_name(static_cast<Layer>(current + 1)))
                   : std::string("nothing; already at the top layer")) +
              ", requested " + std::string(layer_name(req.target)),
          req.claim_id);
  }
  if (req.actor.id == before.proposer.id) {
    raise(Err::SelfVerification,
          "actor '" + req.actor.id +
              "' proposed this claim and cannot verify it",
          req.actor.id);
  }
  for (const auto& eid : req.evidence_ids) {
    if (!graph.has_evidence(eid)) {
      raise(Err::MissingRef, "unknown evidence id '" + eid + "'", eid);
    }
  }
  // Deductive gate: no declared contradiction against validated knowledge.
  for (const auto& rid : before.contradiction_refs) {
    const ClaimNode other = graph.claim(rid);
    if (other.layer == Layer::L2 && other.status == ClaimStatus::Active) {
      raise(Err::ContradictsValidated,
            "claim '" + req.claim_id +
                "' contradicts active validated claim '" + rid + "'",
            rid);
    }
  }

  if (req.target == Layer::L2) {
    const Timestamp now = graph.clock();
    std::set<std::string> pool = before.evidence_refs;
    pool.insert(req.evidence_ids.begin(), req.evidence_ids.end());
    bool qualified = false;
    for (const auto& eid : pool) {
      const Evidence e = graph.evidence(eid);
      if (e.method >= Verification::ScriptAttached && now <= e.valid_until &&
          match_level(before.scope, e.scope) != Congruence::None) {
        qualified = true;
        break;
      }
    }
    if (!qualified) {
      raise(Err::InsufficientEvidence,
            "corroboration needs a non-expired, scope-matched evidence item "
            "at script_attached or better",
            req.claim_id);
    }
  }

  const Event event =
      req.target == Layer::L1 ? Event::Hypothesize : Event::Verify;
  const Phase next_phase = transition(before.phase, event);

  HistoryStep step;
  step.mode = req.target == Layer::L1 ? "deduction" : "induction";
  step.layer = req.target;
  step.evidence_ids = req.evidence_ids;
  step.actor_id = req.actor.id;
  step.at = graph.clock();

  KnowledgeGraph::LifecycleAccess::apply_promotion(
      graph, req.claim_id, req.target, next_phase, std::move(step),
      req.evidence_ids, cfg);
  return graph.claim(req.claim_id);
}

void check_ratifiable(const KnowledgeGraph& graph, const std::string& claim_id,
                      const ActorId& actor) {
  const ClaimNode c = graph.claim(claim_id);
  if (c.layer != Layer::L2) {
    raise(Err::NotCorroborated,
          "claim '" + claim_id + "' is at " + std::string(layer_name(c.layer)) +
              "; ratification requires L2",
          claim_id);
  }
  if (actor.id == c.proposer.id) {
    raise(Err::SelfRatification,
          "actor '" + actor.id + "' proposed this claim and cannot ratify it",
          actor.id);
  }
  if (actor.kind == ActorKind::Generator) {
    raise(Err::SelfRatification,
          "generator-kind actor '" + actor.id +
              "' is inside the generation loop and cannot ratify",
          actor.id);
  }
}

DesignRationaleRecord ratify(KnowledgeGraph& graph, DrrStore& store,
                             const std::string& claim_id, const ActorId& actor,
                             Timestamp valid_from, Timestamp valid_until,
                             const Config& cfg) {
  check_ratifiable(graph, claim_id, actor);
  DesignRationaleRecord drr = finalize_drr(graph, store, claim_id, actor,
                                           valid_from, valid_until, cfg);
  const ClaimNode c = graph.claim(claim_id);
  if (c.phase == Phase::Induction) {
    KnowledgeGraph::LifecycleAccess::set_phase(
        graph, claim_id, transition(Phase::Induction, Event::Validate));
  }
  return drr;
}

}  // namespace adi
