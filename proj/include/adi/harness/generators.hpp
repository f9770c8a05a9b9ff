#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adi/core.hpp"
#include "adi/graph.hpp"
#include "adi/rng.hpp"
#include "adi/scope.hpp"

namespace adi::harness {

// Scores biased toward the IEEE 754 boundaries the fuzz inventory cares
// about: exact 0/1, values adjacent to them, subnormals.
double gen_score(Rng& rng);
double gen_boundary_score(Rng& rng);

std::vector<double> gen_multiset(Rng& rng, std::size_t max_len = 8);

// Scopes drawn from a small dimension/value alphabet so that every
// congruence level actually occurs; ~5% TOP, optional BOTTOM share.
Scope gen_scope(Rng& rng, bool allow_bottom = false);

Verification gen_method(Rng& rng);
EvidenceRole gen_role(Rng& rng);
Formality gen_formality(Rng& rng);
Layer gen_layer(Rng& rng);

// Valid config JSON with randomized (ordering-preserving) values.
std::string gen_valid_config_json(Rng& rng);

// Byte-level mutation: flips, splices, truncation, insertions.
std::string mutate_string(Rng& rng, const std::string& input);

// --- Graph specifications -------------------------------------------------

struct EvidenceSpec {
  double raw = 0.5;
  Verification method = Verification::ExecutedVerified;
  EvidenceRole role = EvidenceRole::Other;
  int scope_idx = 0;
  Formality formality = Formality::F2;
  long age_days = 0;    // collected this many days before `now`
  long life_days = 10;  // valid_until = collected_at + life
  bool llm = false;
};

struct NodeSpec {
  Layer layer = Layer::L2;
  Formality formality = Formality::F2;
  int scope_idx = 0;
  std::vector<EvidenceSpec> evidence;
  std::vector<int> deps;  // indices of earlier nodes only (acyclic)
};

enum class Topology { Chain, Diamond, RandomDag, Mixed };

struct GraphSpec {
  std::vector<NodeSpec> nodes;
  std::vector<Scope> scope_pool;  // index 0 is always TOP
  Timestamp now = 0;
};

GraphSpec gen_graph_spec(Rng& rng, Topology topology, int max_nodes = 50,
                         bool uniform_scope = false);

// Node ids are zero-padded ("c007") so lexicographic order matches index
// order; evidence ids are "e<node>x<k>".
std::string node_id(int index);
std::string evidence_id(int node, int k);

KnowledgeGraph build_graph(const GraphSpec& spec);

std::vector<GraphSpec> shrink_graph_spec(const GraphSpec& spec);

std::string render_graph_spec(const GraphSpec& spec);

// Command sequences for the FSM trace audits -------------------------------

struct Cmd {
  enum Kind {
    Propose = 0,
    Promote,       // valid next-layer attempt
    PromoteSkip,   // deliberately invalid target
    PromoteSelf,   // actor == proposer attempt
    RatifyCmd,
    AddEvidence,
    Link,
    Contradict,
    Sweep,
    AdvanceClock,
    kCount,
  };
  Kind kind = Propose;
  int actor = 0;    // index into the fixed actor pool
  int claim_a = 0;  // resolved modulo live claim count at execution
  int claim_b = 0;
  int scope_idx = 0;
  double score = 0.5;
  int method = 3;
  long life_days = 30;
  long advance_days = 1;
};

using CmdSeq = std::vector<Cmd>;

CmdSeq gen_cmd_seq(Rng& rng, int max_len = 40);
std::vector<CmdSeq> shrink_cmd_seq(const CmdSeq& seq);
std::string render_cmd_seq(const CmdSeq& seq);

// The fixed actor pool used by sequence replay: two generators, a verifier
// and a human.
const std::vector<ActorId>& actor_pool();
const std::vector<Scope>& seq_scope_pool();

}  // namespace adi::harness
