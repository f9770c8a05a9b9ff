#pragma once

// Internal mutation hooks for the lifecycle operations. Not installed; the
// promote/ratify invariants are enforceable only because these bypasses stay
// out of the public surface.

#include "adi/graph.hpp"

namespace adi {

struct KnowledgeGraph::LifecycleAccess {
  // Attaches evidence, sets layer/phase, appends the history step, reactivates
  // the claim and repropagates — one writer step.
  static void apply_promotion(KnowledgeGraph& g, const std::string& claim_id,
                              Layer layer, Phase phase, HistoryStep step,
                              const std::vector<std::string>& evidence_ids,
                              const Config& cfg);

  static void set_phase(KnowledgeGraph& g, const std::string& claim_id,
                        Phase phase);

  static void append_baseline_history(KnowledgeGraph& g,
                                      const std::string& claim_id,
                                      HistoryStep step);
};

}  // namespace adi
