#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adi/core.hpp"
#include "adi/scope.hpp"

namespace adi {

class KnowledgeGraph;
class DrrStore;
struct ClaimNode;
struct DesignRationaleRecord;

// Reasoning-cycle phases. OPERATION is intentionally terminal; every other
// phase can reach IDLE via reset.
enum class Phase : std::uint8_t {
  Idle = 0,
  Abduction,
  Deduction,
  Induction,
  Ratified,
  Operation,
};

enum class Event : std::uint8_t {
  Start = 0,
  Hypothesize,
  Verify,
  Validate,
  Ratify,
  Reset,
  Deploy,
};

constexpr int kPhaseCount = 6;
constexpr int kEventCount = 7;

std::string_view phase_name(Phase p);
std::string_view event_name(Event e);
Phase parse_phase(std::string_view token);
Event parse_event(std::string_view token);

// Deterministic transition table; undefined (phase, event) pairs raise
// IllegalTransition naming the pair.
Phase transition(Phase current, Event event);
bool transition_defined(Phase current, Event event);

enum class ActorKind : std::uint8_t { Generator = 0, Verifier, Human };

std::string_view actor_kind_name(ActorKind k);
ActorKind parse_actor_kind(std::string_view token);

struct ActorId {
  std::string id;
  ActorKind kind = ActorKind::Human;

  friend bool operator==(const ActorId& a, const ActorId& b) {
    return a.id == b.id && a.kind == b.kind;
  }
};

struct PromotionRequest {
  std::string claim_id;
  Layer target = Layer::L1;  // must be exactly one above the current layer
  std::vector<std::string> evidence_ids;
  ActorId actor;
};

// Lifecycle operations. They mutate the graph under its single-writer
// contract; see graph.hpp for the store itself.

// New claim at L0/ABDUCTION with the proposer recorded immutably. Generation
// is unrestricted: any actor kind may propose. Returns the claim id.
std::string propose(KnowledgeGraph& graph, std::string statement, Scope scope,
                    Formality formality, ActorId proposer,
                    std::string id = {});

// L0->L1 requires an external check (actor != proposer) and no declared
// contradiction against an active L2 claim; L1->L2 additionally requires a
// non-expired, scope-matched evidence item at ScriptAttached or better.
// Returns the claim after promotion.
ClaimNode promote(KnowledgeGraph& graph, const PromotionRequest& req,
                  const Config& cfg);

// Throws unless the claim is ratifiable by the actor: NotCorroborated below
// L2, SelfRatification for the proposer or any generator-kind actor.
void check_ratifiable(const KnowledgeGraph& graph, const std::string& claim_id,
                      const ActorId& actor);

// Ratification requires an L2 claim and an actor that is neither the
// proposer nor any generator-kind actor. Emits a DRR onto the store and
// moves the claim into the RATIFIED phase.
DesignRationaleRecord ratify(KnowledgeGraph& graph, DrrStore& store,
                             const std::string& claim_id, const ActorId& actor,
                             Timestamp valid_from, Timestamp valid_until,
                             const Config& cfg);

}  // namespace adi
