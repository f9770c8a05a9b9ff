#include "adi/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>

#include "adi/error.hpp"
#include "json.hpp"

namespace adi {

using nlohmann::json;

namespace {

constexpr std::string_view kStatusNames[] = {"active", "stale", "discarded",
                                             "contradicted"};

}  // namespace

std::string_view claim_status_name(ClaimStatus s) {
  return kStatusNames[static_cast<int>(s)];
}

ClaimStatus parse_claim_status(std::string_view token) {
  for (int i = 0; i < 4; ++i) {
    if (kStatusNames[i] == token) return static_cast<ClaimStatus>(i);
  }
  raise(Err::ParseError, "unknown claim status: '" + std::string(token) + "'");
}

double decay_factor(Timestamp now, Timestamp valid_until, Timestamp grace) {
  if (now <= valid_until) return 1.0;
  if (grace <= 0) return 0.0;
  if (now >= valid_until + grace) return 0.0;
  return 1.0 - static_cast<double>(now - valid_until) /
                   static_cast<double>(grace);
}

AdjustedEvidence adjust_evidence(const Evidence& e, const Scope& claim_scope,
                                 Timestamp now, const Config& cfg) {
  AdjustedEvidence out;
  out.match = match_level(claim_scope, e.scope);
  if (out.match == Congruence::None) {
    out.excluded = true;
    return out;
  }
  double v = make_score(e.raw_score) * cfg.multiplier(e.method);
  out.decay = decay_factor(now, e.valid_until, cfg.grace_duration());
  v *= out.decay;
  v = std::max(0.0, v - cfg.penalty(out.match));
  if (cfg.llm_generated_cap && e.llm_generated() &&
      v > *cfg.llm_generated_cap) {
    v = *cfg.llm_generated_cap;
    out.capped = true;
  }
  out.value = v;
  return out;
}

double probabilistic_sum(std::span<const double> scores) {
  double q = 1.0;
  for (double s : scores) q *= (1.0 - make_score(s));
  return std::clamp(1.0 - q, 0.0, 1.0);
}

double conservative_owa(std::span<const double> scores) {
  std::vector<double> asc(scores.begin(), scores.end());
  for (double s : asc) make_score(s);
  std::sort(asc.begin(), asc.end());
  const double n = static_cast<double>(asc.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < asc.size(); ++i) {
    // 1-based rank: the smallest input carries the heaviest weight.
    const double rank = static_cast<double>(i + 1);
    const double w = 2.0 * (n - rank + 1.0) / (n * (n + 1.0));
    acc += w * asc[i];
  }
  return std::clamp(acc, 0.0, 1.0);
}

TwoTierResult two_tier_aggregate(const TwoTierInput& input) {
  if (input.empty()) {
    raise(Err::EmptyEvidence, "two-tier aggregation needs at least one role group");
  }
  TwoTierResult res;
  if (!input.gates.empty()) {
    double g = 1.0;
    for (const GateOutcome& gate : input.gates) {
      double s = gate.passed ? make_score(gate.score) : 0.0;
      g = std::min(g, s);
    }
    res.gate = g;
  }
  if (!input.quality.empty()) res.quality = probabilistic_sum(input.quality);
  if (!input.performance.empty()) {
    res.performance = conservative_owa(input.performance);
  }
  if (!input.other.empty()) {
    double m = 1.0;
    for (double s : input.other) m = std::min(m, make_score(s));
    res.other = m;
  }
  double overall = 1.0;
  for (const auto& role : {res.gate, res.quality, res.performance, res.other}) {
    if (role) overall = std::min(overall, *role);
  }
  res.overall = overall;
  return res;
}

// ---------------------------------------------------------------------------
// KnowledgeGraph
// ---------------------------------------------------------------------------

KnowledgeGraph::KnowledgeGraph(const KnowledgeGraph& other) {
  std::shared_lock lk(other.mu_);
  st_ = other.st_;
}

KnowledgeGraph& KnowledgeGraph::operator=(const KnowledgeGraph& other) {
  if (this == &other) return *this;
  State copy;
  {
    std::shared_lock lk(other.mu_);
    copy = other.st_;
  }
  std::unique_lock lk(mu_);
  st_ = std::move(copy);
  return *this;
}

Timestamp KnowledgeGraph::clock() const {
  std::shared_lock lk(mu_);
  return st_.clock;
}

void KnowledgeGraph::set_clock_unlocked(Timestamp now) {
  if (st_.clock == now) return;
  st_.clock = now;
  // Decay makes every cached score time-dependent.
  for (const auto& [id, claim] : st_.claims) {
    (void)claim;
    st_.dirty.insert(id);
  }
}

void KnowledgeGraph::set_clock(Timestamp now) {
  std::unique_lock lk(mu_);
  set_clock_unlocked(now);
}

ClaimNode& KnowledgeGraph::claim_ref(const std::string& id) {
  auto it = st_.claims.find(id);
  if (it == st_.claims.end()) {
    raise(Err::MissingRef, "unknown claim id '" + id + "'", id);
  }
  return it->second;
}

const ClaimNode& KnowledgeGraph::claim_ref(const std::string& id) const {
  auto it = st_.claims.find(id);
  if (it == st_.claims.end()) {
    raise(Err::MissingRef, "unknown claim id '" + id + "'", id);
  }
  return it->second;
}

Evidence& KnowledgeGraph::evidence_ref(const std::string& id) {
  auto it = st_.evidence.find(id);
  if (it == st_.evidence.end()) {
    raise(Err::MissingRef, "unknown evidence id '" + id + "'", id);
  }
  return it->second;
}

const Evidence& KnowledgeGraph::evidence_ref(const std::string& id) const {
  auto it = st_.evidence.find(id);
  if (it == st_.evidence.end()) {
    raise(Err::MissingRef, "unknown evidence id '" + id + "'", id);
  }
  return it->second;
}

void KnowledgeGraph::mark_dirty(const std::string& claim_id) {
  st_.dirty.insert(claim_id);
}

void KnowledgeGraph::mark_all_dirty() {
  for (const auto& [id, claim] : st_.claims) {
    (void)claim;
    st_.dirty.insert(id);
  }
}

void KnowledgeGraph::add_claim(ClaimNode claim) {
  std::unique_lock lk(mu_);
  if (claim.id.empty()) {
    raise(Err::RangeViolation, "claim id must be non-empty");
  }
  if (st_.claims.count(claim.id)) {
    raise(Err::DuplicateId, "duplicate claim id '" + claim.id + "'", claim.id);
  }
  for (const auto& ref : claim.evidence_refs) {
    if (!st_.evidence.count(ref)) {
      raise(Err::MissingRef, "claim references unknown evidence '" + ref + "'",
            ref);
    }
  }
  for (const auto& ref : claim.dependency_refs) {
    if (!st_.claims.count(ref)) {
      raise(Err::MissingRef, "claim depends on unknown claim '" + ref + "'",
            ref);
    }
  }
  const std::string id = claim.id;
  for (const auto& ref : claim.evidence_refs) {
    st_.evidence_users[ref].insert(id);
  }
  for (const auto& ref : claim.dependency_refs) {
    st_.dependents[ref].insert(id);
  }
  st_.claims.emplace(id, std::move(claim));
  mark_dirty(id);
}

void KnowledgeGraph::add_evidence(Evidence evidence) {
  std::unique_lock lk(mu_);
  if (evidence.id.empty()) {
    raise(Err::RangeViolation, "evidence id must be non-empty");
  }
  if (st_.evidence.count(evidence.id)) {
    raise(Err::DuplicateId, "duplicate evidence id '" + evidence.id + "'",
          evidence.id);
  }
  make_score(evidence.raw_score);
  if (evidence.valid_until < evidence.collected_at) {
    raise(Err::RangeViolation,
          "evidence '" + evidence.id + "' has valid_until before collected_at");
  }
  st_.evidence.emplace(evidence.id, std::move(evidence));
}

void KnowledgeGraph::attach_evidence(const std::string& claim_id,
                                     const std::string& evidence_id) {
  std::unique_lock lk(mu_);
  ClaimNode& c = claim_ref(claim_id);
  evidence_ref(evidence_id);
  if (c.evidence_refs.insert(evidence_id).second) {
    st_.evidence_users[evidence_id].insert(claim_id);
    mark_dirty(claim_id);
  }
}

bool KnowledgeGraph::would_cycle(const std::string& from,
                                 const std::string& to) const {
  // Edge from -> to means `from` depends on `to`; a cycle appears when `from`
  // is already reachable from `to` along dependency edges.
  std::vector<const std::string*> stack{&to};
  std::set<std::string> seen;
  while (!stack.empty()) {
    const std::string& cur = *stack.back();
    stack.pop_back();
    if (cur == from) return true;
    if (!seen.insert(cur).second) continue;
    auto it = st_.claims.find(cur);
    if (it == st_.claims.end()) continue;
    for (const auto& dep : it->second.dependency_refs) {
      stack.push_back(&dep);
    }
  }
  return false;
}

void KnowledgeGraph::link_dependency(const std::string& from,
                                     const std::string& to) {
  std::unique_lock lk(mu_);
  claim_ref(from);
  claim_ref(to);
  if (from == to || would_cycle(from, to)) {
    raise(Err::CycleDetected,
          "dependency " + from + " -> " + to + " would create a cycle",
          from + "->" + to);
  }
  if (claim_ref(from).dependency_refs.insert(to).second) {
    st_.dependents[to].insert(from);
    mark_dirty(from);
  }
}

void KnowledgeGraph::declare_contradiction(const std::string& a,
                                           const std::string& b) {
  std::unique_lock lk(mu_);
  ClaimNode& ca = claim_ref(a);
  ClaimNode& cb = claim_ref(b);
  if (a == b) {
    raise(Err::RangeViolation, "a claim cannot contradict itself", a);
  }
  ca.contradiction_refs.insert(b);
  cb.contradiction_refs.insert(a);
}

void KnowledgeGraph::set_status(const std::string& claim_id,
                                ClaimStatus status) {
  std::unique_lock lk(mu_);
  claim_ref(claim_id).status = status;
}

bool KnowledgeGraph::has_claim(const std::string& id) const {
  std::shared_lock lk(mu_);
  return st_.claims.count(id) != 0;
}

bool KnowledgeGraph::has_evidence(const std::string& id) const {
  std::shared_lock lk(mu_);
  return st_.evidence.count(id) != 0;
}

ClaimNode KnowledgeGraph::claim(const std::string& id) const {
  std::shared_lock lk(mu_);
  return claim_ref(id);
}

Evidence KnowledgeGraph::evidence(const std::string& id) const {
  std::shared_lock lk(mu_);
  return evidence_ref(id);
}

std::vector<std::string> KnowledgeGraph::claim_ids() const {
  std::shared_lock lk(mu_);
  std::vector<std::string> ids;
  ids.reserve(st_.claims.size());
  for (const auto& [id, c] : st_.claims) {
    (void)c;
    ids.push_back(id);
  }
  return ids;
}

std::vector<std::string> KnowledgeGraph::evidence_ids() const {
  std::shared_lock lk(mu_);
  std::vector<std::string> ids;
  ids.reserve(st_.evidence.size());
  for (const auto& [id, e] : st_.evidence) {
    (void)e;
    ids.push_back(id);
  }
  return ids;
}

std::size_t KnowledgeGraph::claim_count() const {
  std::shared_lock lk(mu_);
  return st_.claims.size();
}

std::size_t KnowledgeGraph::evidence_count() const {
  std::shared_lock lk(mu_);
  return st_.evidence.size();
}

std::vector<std::string> KnowledgeGraph::topological_order(
    const std::set<std::string>& restrict_to, bool restricted) const {
  auto in_set = [&](const std::string& id) {
    return !restricted || restrict_to.count(id) != 0;
  };

  std::map<std::string, int> in_degree;
  for (const auto& [id, c] : st_.claims) {
    if (!in_set(id)) continue;
    int deg = 0;
    for (const auto& dep : c.dependency_refs) {
      if (in_set(dep)) ++deg;
    }
    in_degree[id] = deg;
  }

  std::set<std::string> ready;
  for (const auto& [id, deg] : in_degree) {
    if (deg == 0) ready.insert(id);
  }

  std::vector<std::string> order;
  order.reserve(in_degree.size());
  while (!ready.empty()) {
    std::string id = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(id);
    auto dep_it = st_.dependents.find(id);
    if (dep_it == st_.dependents.end()) continue;
    for (const auto& dependent : dep_it->second) {
      auto deg_it = in_degree.find(dependent);
      if (deg_it == in_degree.end()) continue;
      if (--deg_it->second == 0) ready.insert(dependent);
    }
  }

  if (order.size() != in_degree.size()) {
    raise(Err::CycleDetected, "dependency graph contains a cycle");
  }
  return order;
}

double KnowledgeGraph::compute_r_eff(const ClaimNode& c,
                                     const Config& cfg) const {
  // Eq. 1 fold: empty evidence/dependency sets contribute the min identity.
  double r = std::min(cfg.ceiling(c.layer), cfg.ceiling(c.formality));
  for (const auto& eid : c.evidence_refs) {
    const AdjustedEvidence adj =
        adjust_evidence(evidence_ref(eid), c.scope, st_.clock, cfg);
    if (adj.excluded) continue;
    r = std::min(r, adj.value);
  }
  for (const auto& did : c.dependency_refs) {
    const ClaimNode& dep = claim_ref(did);
    const Congruence match = match_level(c.scope, dep.scope);
    // A dependency whose scope does not transfer at all contributes zero
    // support rather than silently dropping out.
    const double term =
        match == Congruence::None
            ? 0.0
            : std::max(0.0, dep.cached_r_eff - cfg.penalty(match));
    r = std::min(r, term);
  }
  return r;
}

std::set<std::string> KnowledgeGraph::dependents_closure(
    const std::set<std::string>& seeds) const {
  std::set<std::string> closure = seeds;
  std::deque<std::string> frontier(seeds.begin(), seeds.end());
  while (!frontier.empty()) {
    std::string cur = frontier.front();
    frontier.pop_front();
    auto it = st_.dependents.find(cur);
    if (it == st_.dependents.end()) continue;
    for (const auto& dependent : it->second) {
      if (closure.insert(dependent).second) frontier.push_back(dependent);
    }
  }
  return closure;
}

void KnowledgeGraph::propagate_unlocked(const Config& cfg,
                                        PropagateMode mode) {
  std::vector<std::string> order;
  if (mode == PropagateMode::Full) {
    order = topological_order({}, false);
  } else {
    if (st_.dirty.empty()) return;
    std::set<std::string> target = dependents_closure(st_.dirty);
    order = topological_order(target, true);
  }
  for (const auto& id : order) {
    ClaimNode& c = st_.claims.at(id);
    c.cached_r_eff = compute_r_eff(c, cfg);
  }
  st_.dirty.clear();
}

void KnowledgeGraph::propagate(const Config& cfg, Timestamp now,
                               PropagateMode mode) {
  std::unique_lock lk(mu_);
  set_clock_unlocked(now);
  propagate_unlocked(cfg, mode);
}

double KnowledgeGraph::effective_reliability(const std::string& claim_id,
                                             const Config& cfg,
                                             Timestamp now) {
  std::unique_lock lk(mu_);
  claim_ref(claim_id);
  set_clock_unlocked(now);
  propagate_unlocked(cfg, PropagateMode::Incremental);
  return st_.claims.at(claim_id).cached_r_eff;
}

double KnowledgeGraph::cached_score(const std::string& claim_id) const {
  std::shared_lock lk(mu_);
  return claim_ref(claim_id).cached_r_eff;
}

void KnowledgeGraph::update_evidence_score(const std::string& evidence_id,
                                           double raw_score, const Config& cfg,
                                           Timestamp now) {
  std::unique_lock lk(mu_);
  Evidence& e = evidence_ref(evidence_id);
  e.raw_score = make_score(raw_score);
  auto it = st_.evidence_users.find(evidence_id);
  if (it != st_.evidence_users.end()) {
    for (const auto& user : it->second) mark_dirty(user);
  }
  set_clock_unlocked(now);
  propagate_unlocked(cfg, PropagateMode::Incremental);
}

ReffBreakdown KnowledgeGraph::explain_unlocked(const std::string& claim_id,
                                               const Config& cfg) const {
  const ClaimNode& c = claim_ref(claim_id);
  ReffBreakdown out;
  out.claim_id = claim_id;

  for (const auto& eid : c.evidence_refs) {
    const AdjustedEvidence adj =
        adjust_evidence(evidence_ref(eid), c.scope, st_.clock, cfg);
    ReffTerm t;
    t.kind = TermKind::EvidenceTerm;
    t.ref = eid;
    t.excluded = adj.excluded;
    t.match = adj.match;
    t.value = adj.excluded ? 0.0 : adj.value;
    t.penalty = adj.excluded ? 0.0 : cfg.penalty(adj.match);
    out.terms.push_back(std::move(t));
  }
  for (const auto& did : c.dependency_refs) {
    const ClaimNode& dep = claim_ref(did);
    const Congruence match = match_level(c.scope, dep.scope);
    ReffTerm t;
    t.kind = TermKind::DependencyTerm;
    t.ref = did;
    t.match = match;
    if (match == Congruence::None) {
      t.value = 0.0;
      t.penalty = 0.0;
    } else {
      t.penalty = cfg.penalty(match);
      t.value = std::max(0.0, dep.cached_r_eff - t.penalty);
    }
    out.terms.push_back(std::move(t));
  }
  ReffTerm layer_term;
  layer_term.kind = TermKind::LayerCeiling;
  layer_term.ref = std::string(layer_name(c.layer));
  layer_term.value = cfg.ceiling(c.layer);
  out.terms.push_back(std::move(layer_term));
  ReffTerm formality_term;
  formality_term.kind = TermKind::FormalityCeiling;
  formality_term.ref = std::string(formality_name(c.formality));
  formality_term.value = cfg.ceiling(c.formality);
  out.terms.push_back(std::move(formality_term));

  // The ceiling terms are always present, so the min set is never empty.
  double r = 1.0;
  for (const ReffTerm& t : out.terms) {
    if (t.kind == TermKind::EvidenceTerm && t.excluded) continue;
    r = std::min(r, t.value);
  }
  std::size_t dominating = out.terms.size() - 1;
  for (std::size_t i = 0; i < out.terms.size(); ++i) {
    const ReffTerm& t = out.terms[i];
    if (t.kind == TermKind::EvidenceTerm && t.excluded) continue;
    if (t.value == r) {
      dominating = i;
      break;
    }
  }
  out.r_eff = r;
  out.dominating = dominating;
  return out;
}

ReffBreakdown KnowledgeGraph::explain(const std::string& claim_id,
                                      const Config& cfg, Timestamp now) {
  std::unique_lock lk(mu_);
  claim_ref(claim_id);
  set_clock_unlocked(now);
  propagate_unlocked(cfg, PropagateMode::Incremental);
  return explain_unlocked(claim_id, cfg);
}

std::vector<std::string> KnowledgeGraph::sweep_stale(const Config& cfg,
                                                     Timestamp now) {
  std::unique_lock lk(mu_);
  set_clock_unlocked(now);

  std::set<std::string> flagged;
  for (auto& [id, c] : st_.claims) {
    if (c.status == ClaimStatus::Discarded ||
        c.status == ClaimStatus::Contradicted) {
      continue;
    }
    bool has_expired_qualifying = false;
    bool has_live_qualifying = false;
    for (const auto& eid : c.evidence_refs) {
      const Evidence& e = evidence_ref(eid);
      const bool qualifying =
          e.method >= Verification::ScriptAttached &&
          match_level(c.scope, e.scope) != Congruence::None;
      if (!qualifying) continue;
      if (now > e.valid_until) {
        has_expired_qualifying = true;
      } else {
        has_live_qualifying = true;
      }
    }
    if (has_expired_qualifying) flagged.insert(id);
    if (c.layer == Layer::L2 && !has_live_qualifying) {
      // Staleness invalidates the empirical (L2) support, not the logical
      // consistency already established at L1.
      c.layer = Layer::L1;
      c.phase = Phase::Deduction;
      flagged.insert(id);
      mark_dirty(id);
    }
  }

  std::set<std::string> all_flagged = dependents_closure(flagged);
  for (const auto& id : all_flagged) {
    ClaimNode& c = st_.claims.at(id);
    if (c.status == ClaimStatus::Active) c.status = ClaimStatus::Stale;
  }

  propagate_unlocked(cfg, PropagateMode::Incremental);
  return {all_flagged.begin(), all_flagged.end()};
}

std::vector<InspectRow> KnowledgeGraph::inspect_dependencies(
    const std::string& claim_id) const {
  std::shared_lock lk(mu_);
  claim_ref(claim_id);

  std::vector<InspectRow> rows;
  std::set<std::string> seen_claims;
  std::set<std::string> seen_evidence;

  // Level-order expansion keeps depth assignment minimal and the per-level
  // lexicographic order deterministic.
  std::vector<std::string> level{claim_id};
  seen_claims.insert(claim_id);
  int depth = 0;
  while (!level.empty()) {
    std::sort(level.begin(), level.end());
    std::vector<std::string> next_claims;
    std::vector<InspectRow> level_rows;
    for (const auto& id : level) {
      const ClaimNode& c = st_.claims.at(id);
      InspectRow row;
      row.id = id;
      row.is_evidence = false;
      row.depth = depth;
      row.layer = c.layer;
      row.status = c.status;
      row.r_eff = c.cached_r_eff;
      level_rows.push_back(std::move(row));
      for (const auto& dep : c.dependency_refs) {
        if (seen_claims.insert(dep).second) next_claims.push_back(dep);
      }
      for (const auto& eid : c.evidence_refs) {
        if (seen_evidence.insert(eid).second) {
          const Evidence& e = evidence_ref(eid);
          InspectRow ev_row;
          ev_row.id = eid;
          ev_row.is_evidence = true;
          ev_row.depth = depth + 1;
          ev_row.raw_score = e.raw_score;
          ev_row.role = e.role;
          level_rows.push_back(std::move(ev_row));
        }
      }
    }
    std::stable_sort(level_rows.begin(), level_rows.end(),
                     [](const InspectRow& a, const InspectRow& b) {
                       if (a.depth != b.depth) return a.depth < b.depth;
                       return a.id < b.id;
                     });
    for (auto& r : level_rows) rows.push_back(std::move(r));
    level = std::move(next_claims);
    ++depth;
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const InspectRow& a, const InspectRow& b) {
                     if (a.depth != b.depth) return a.depth < b.depth;
                     return a.id < b.id;
                   });
  return rows;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

json actor_to_json(const ActorId& a) {
  return json{{"id", a.id}, {"kind", std::string(actor_kind_name(a.kind))}};
}

ActorId actor_from_json(const json& j) {
  ActorId a;
  a.id = j.at("id").get<std::string>();
  a.kind = parse_actor_kind(j.at("kind").get<std::string>());
  return a;
}

json claim_to_json(const ClaimNode& c) {
  json j;
  j["type"] = "claim";
  j["id"] = c.id;
  j["statement"] = c.statement;
  j["layer"] = std::string(layer_name(c.layer));
  j["formality"] = std::string(formality_name(c.formality));
  j["scope"] = serialize_scope(c.scope);
  j["proposer"] = actor_to_json(c.proposer);
  j["evidence_refs"] = c.evidence_refs;
  j["dependency_refs"] = c.dependency_refs;
  j["contradiction_refs"] = c.contradiction_refs;
  j["status"] = std::string(claim_status_name(c.status));
  j["cached_r_eff"] = c.cached_r_eff;
  j["phase"] = std::string(phase_name(c.phase));
  json steps = json::array();
  for (const HistoryStep& s : c.history) {
    steps.push_back(json{{"mode", s.mode},
                         {"layer", std::string(layer_name(s.layer))},
                         {"evidence_ids", s.evidence_ids},
                         {"actor_id", s.actor_id},
                         {"at", format_rfc3339(s.at)}});
  }
  j["history"] = std::move(steps);
  return j;
}

ClaimNode claim_from_json(const json& j) {
  ClaimNode c;
  c.id = j.at("id").get<std::string>();
  c.statement = j.at("statement").get<std::string>();
  c.layer = parse_layer(j.at("layer").get<std::string>());
  c.formality = parse_formality(j.at("formality").get<std::string>());
  c.scope = parse_scope(j.at("scope").get<std::string>());
  c.proposer = actor_from_json(j.at("proposer"));
  for (const auto& r : j.at("evidence_refs")) {
    c.evidence_refs.insert(r.get<std::string>());
  }
  for (const auto& r : j.at("dependency_refs")) {
    c.dependency_refs.insert(r.get<std::string>());
  }
  for (const auto& r : j.at("contradiction_refs")) {
    c.contradiction_refs.insert(r.get<std::string>());
  }
  c.status = parse_claim_status(j.at("status").get<std::string>());
  c.cached_r_eff = make_score(j.at("cached_r_eff").get<double>());
  c.phase = parse_phase(j.at("phase").get<std::string>());
  for (const auto& s : j.at("history")) {
    HistoryStep step;
    step.mode = s.at("mode").get<std::string>();
    step.layer = parse_layer(s.at("layer").get<std::string>());
    for (const auto& e : s.at("evidence_ids")) {
      step.evidence_ids.push_back(e.get<std::string>());
    }
    step.actor_id = s.at("actor_id").get<std::string>();
    step.at = parse_rfc3339(s.at("at").get<std::string>());
    c.history.push_back(std::move(step));
  }
  return c;
}

json evidence_to_json(const Evidence& e) {
  json j;
  j["type"] = "evidence";
  j["id"] = e.id;
  j["raw_score"] = e.raw_score;
  j["formality"] = std::string(formality_name(e.formality));
  j["scope"] = serialize_scope(e.scope);
  j["method"] = std::string(verification_name(e.method));
  j["role"] = std::string(role_name(e.role));
  j["collected_at"] = format_rfc3339(e.collected_at);
  j["valid_until"] = format_rfc3339(e.valid_until);
  j["provenance"] = e.provenance;
  return j;
}

Evidence evidence_from_json(const json& j) {
  Evidence e;
  e.id = j.at("id").get<std::string>();
  e.raw_score = make_score(j.at("raw_score").get<double>());
  e.formality = parse_formality(j.at("formality").get<std::string>());
  e.scope = parse_scope(j.at("scope").get<std::string>());
  e.method = parse_verification(j.at("method").get<std::string>());
  e.role = parse_role(j.at("role").get<std::string>());
  e.collected_at = parse_rfc3339(j.at("collected_at").get<std::string>());
  e.valid_until = parse_rfc3339(j.at("valid_until").get<std::string>());
  e.provenance = j.at("provenance").get<std::string>();
  return e;
}

}  // namespace

void KnowledgeGraph::save(std::ostream& out) const {
  std::shared_lock lk(mu_);
  for (const auto& [id, e] : st_.evidence) {
    (void)id;
    out << evidence_to_json(e).dump() << '\n';
  }
  for (const auto& [id, c] : st_.claims) {
    (void)id;
    out << claim_to_json(c).dump() << '\n';
  }
}

void KnowledgeGraph::save_file(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) raise(Err::IoError, "cannot write graph store: " + tmp);
    save(out);
    out.flush();
    if (!out) raise(Err::IoError, "short write to graph store: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    raise(Err::IoError, "cannot replace graph store: " + path);
  }
}

void KnowledgeGraph::validate_integrity() const {
  for (const auto& [id, c] : st_.claims) {
    for (const auto& ref : c.evidence_refs) {
      if (!st_.evidence.count(ref)) {
        raise(Err::MissingRef,
              "claim '" + id + "' references unknown evidence '" + ref + "'",
              ref);
      }
    }
    for (const auto& ref : c.dependency_refs) {
      if (!st_.claims.count(ref)) {
        raise(Err::MissingRef,
              "claim '" + id + "' depends on unknown claim '" + ref + "'", ref);
      }
    }
    for (const auto& ref : c.contradiction_refs) {
      if (!st_.claims.count(ref)) {
        raise(Err::MissingRef,
              "claim '" + id + "' contradicts unknown claim '" + ref + "'",
              ref);
      }
    }
  }
  topological_order({}, false);  // throws CycleDetected on a cycle
}

KnowledgeGraph KnowledgeGraph::load(std::istream& in) {
  KnowledgeGraph g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      raise(Err::ParseError,
            "graph store line " + std::to_string(line_no) + " is not valid JSON");
    }
    try {
      const std::string type = j.at("type").get<std::string>();
      if (type == "evidence") {
        Evidence e = evidence_from_json(j);
        if (g.st_.evidence.count(e.id)) {
          raise(Err::DuplicateId, "duplicate evidence id '" + e.id + "'", e.id);
        }
        if (e.valid_until < e.collected_at) {
          raise(Err::RangeViolation,
                "evidence '" + e.id + "' has valid_until before collected_at");
        }
        g.st_.evidence.emplace(e.id, std::move(e));
      } else if (type == "claim") {
        ClaimNode c = claim_from_json(j);
        if (g.st_.claims.count(c.id)) {
          raise(Err::DuplicateId, "duplicate claim id '" + c.id + "'", c.id);
        }
        g.st_.claims.emplace(c.id, std::move(c));
      } else {
        raise(Err::ParseError, "unknown entity type '" + type + "' at line " +
                                   std::to_string(line_no));
      }
    } catch (const json::exception& e) {
      raise(Err::ParseError, "graph store line " + std::to_string(line_no) +
                                 ": " + e.what());
    }
  }
  // Rebuild indices, then check referential integrity and acyclicity.
  for (const auto& [id, c] : g.st_.claims) {
    for (const auto& ref : c.evidence_refs) {
      g.st_.evidence_users[ref].insert(id);
    }
    for (const auto& ref : c.dependency_refs) {
      g.st_.dependents[ref].insert(id);
    }
  }
  g.validate_integrity();
  return g;
}

KnowledgeGraph KnowledgeGraph::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Err::IoError, "cannot open graph store: " + path);
  return load(in);
}

KnowledgeGraph KnowledgeGraph::snapshot() const { return KnowledgeGraph(*this); }

}  // namespace adi
