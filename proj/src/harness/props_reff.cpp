#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "adi/error.hpp"
#include "adi/harness/generators.hpp"
#include "adi/harness/oracles.hpp"
#include "json.hpp"
#include "registry.hpp"

namespace adi::harness {

namespace {

constexpr Timestamp kBaseNow = 1'750'000'000;

struct EvCase {
  Evidence e;
  Scope claim_scope;
  Timestamp now = kBaseNow;
};

Evidence gen_evidence_item(Rng& rng, Timestamp now) {
  Evidence e;
  e.id = "e-0";
  e.raw_score = gen_score(rng);
  e.formality = gen_formality(rng);
  e.scope = gen_scope(rng, false);
  e.method = gen_method(rng);
  e.role = gen_role(rng);
  const long age = static_cast<long>(rng.below(40));
  const long life = static_cast<long>(rng.below(60));
  e.collected_at = now - days(age);
  e.valid_until = e.collected_at + days(life);
  e.provenance = rng.chance(0.2) ? "llm-generated sample" : "lab notebook";
  return e;
}

EvCase gen_ev_case(Rng& rng) {
  EvCase c;
  c.now = kBaseNow + static_cast<Timestamp>(rng.below(days(30)));
  c.e = gen_evidence_item(rng, c.now);
  c.claim_scope = gen_scope(rng, false);
  return c;
}

std::string show_ev_case(const EvCase& c) {
  std::ostringstream os;
  os.precision(17);
  os << "raw=" << c.e.raw_score << " method=" << verification_name(c.e.method)
     << " ev_scope=" << serialize_scope(c.e.scope)
     << " claim_scope=" << serialize_scope(c.claim_scope)
     << " collected=" << c.e.collected_at << " valid_until=" << c.e.valid_until
     << " now=" << c.now << (c.e.llm_generated() ? " llm" : "");
  return os.str();
}

TypedCase<EvCase> ev_case(std::function<bool(const EvCase&)> holds) {
  TypedCase<EvCase> tc;
  tc.gen = gen_ev_case;
  tc.holds = std::move(holds);
  tc.shrinks = [](const EvCase& c) {
    std::vector<EvCase> out;
    for (double v : shrink_score(c.e.raw_score)) {
      EvCase copy = c;
      copy.e.raw_score = v;
      out.push_back(std::move(copy));
    }
    return out;
  };
  tc.show = show_ev_case;
  return tc;
}

// Scope pairs with a forced congruence level.
void force_match(Rng& rng, Congruence want, Scope& claim, Scope& evidence) {
  switch (want) {
    case Congruence::CL3:
      claim = gen_scope(rng, false);
      evidence = claim;
      break;
    case Congruence::CL2: {
      claim = gen_scope(rng, false);
      auto m = claim.constraints();
      m["stage"] = "canary";
      evidence = Scope::from_constraints(std::move(m));
      if (rng.chance(0.5)) std::swap(claim, evidence);
      break;
    }
    case Congruence::CL1:
      claim = Scope::of({{"env", "prod"}, {"region", "eu"}});
      evidence = Scope::of({{"env", "prod"}, {"region", "us"}});
      break;
    case Congruence::None:
      claim = Scope::of({{"env", "prod"}});
      evidence = Scope::of({{"env", "dev"}});
      break;
  }
}

double expected_pipeline(const Config& cfg, const Evidence& e, double penalty,
                         double decay) {
  double v = e.raw_score * cfg.multiplier(e.method);
  v *= decay;
  return std::max(0.0, v - penalty);
}

// Single-claim fixtures ------------------------------------------------------

struct SingleClaim {
  Layer layer = Layer::L2;
  Formality formality = Formality::F2;
  Scope scope;
  std::vector<Evidence> evidence;
  Timestamp now = kBaseNow;
};

KnowledgeGraph build_single(const SingleClaim& s,
                            const std::vector<int>& order = {}) {
  KnowledgeGraph g;
  g.set_clock(s.now);
  std::vector<int> idx(s.evidence.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  if (!order.empty()) idx = order;
  for (int i : idx) {
    Evidence e = s.evidence[static_cast<std::size_t>(i)];
    e.id = "e-" + std::to_string(i);
    g.add_evidence(std::move(e));
  }
  ClaimNode c;
  c.id = "c-0";
  c.statement = "single";
  c.layer = s.layer;
  c.formality = s.formality;
  c.scope = s.scope;
  c.proposer = ActorId{"gen-0", ActorKind::Generator};
  for (std::size_t i = 0; i < s.evidence.size(); ++i) {
    c.evidence_refs.insert("e-" + std::to_string(i));
  }
  g.add_claim(std::move(c));
  return g;
}

SingleClaim gen_single(Rng& rng, int max_evidence = 5) {
  SingleClaim s;
  s.layer = gen_layer(rng);
  s.formality = gen_formality(rng);
  s.scope = gen_scope(rng, false);
  s.now = kBaseNow + static_cast<Timestamp>(rng.below(days(20)));
  const int n = static_cast<int>(rng.below(max_evidence + 1));
  for (int i = 0; i < n; ++i) {
    s.evidence.push_back(gen_evidence_item(rng, s.now));
  }
  return s;
}

std::string show_single(const SingleClaim& s) {
  std::ostringstream os;
  os.precision(17);
  os << layer_name(s.layer) << "/" << formality_name(s.formality)
     << " scope=" << serialize_scope(s.scope) << " now=" << s.now;
  for (const auto& e : s.evidence) {
    os << " ev(raw=" << e.raw_score << "," << verification_name(e.method)
       << "," << serialize_scope(e.scope) << (e.llm_generated() ? ",llm" : "")
       << ")";
  }
  return os.str();
}

TypedCase<SingleClaim> single_case(const Env& env,
                                   std::function<bool(const Env&, const SingleClaim&)> holds) {
  TypedCase<SingleClaim> tc;
  tc.gen = [](Rng& rng) { return gen_single(rng); };
  tc.holds = [env, holds](const SingleClaim& s) { return holds(env, s); };
  tc.shrinks = [](const SingleClaim& s) {
    std::vector<SingleClaim> out;
    for (std::size_t i = 0; i < s.evidence.size(); ++i) {
      SingleClaim copy = s;
      copy.evidence.erase(copy.evidence.begin() +
                          static_cast<std::ptrdiff_t>(i));
      out.push_back(std::move(copy));
    }
    for (std::size_t i = 0; i < s.evidence.size(); ++i) {
      for (double v : shrink_score(s.evidence[i].raw_score)) {
        SingleClaim copy = s;
        copy.evidence[i].raw_score = v;
        out.push_back(std::move(copy));
      }
    }
    return out;
  };
  tc.show = show_single;
  return tc;
}

double env_score_single(const Env& env, const SingleClaim& s,
                        const std::vector<int>& order = {}) {
  KnowledgeGraph g = build_single(s, order);
  return env.score_all(g, s.now).at("c-0");
}

// Two-tier fixtures ----------------------------------------------------------

TwoTierInput gen_two_tier(Rng& rng, bool ensure_nonempty = true) {
  TwoTierInput in;
  const int gates = static_cast<int>(rng.below(4));
  for (int i = 0; i < gates; ++i) {
    in.gates.push_back(GateOutcome{gen_score(rng), rng.chance(0.8)});
  }
  const int quality = static_cast<int>(rng.below(4));
  for (int i = 0; i < quality; ++i) in.quality.push_back(gen_score(rng));
  const int perf = static_cast<int>(rng.below(4));
  for (int i = 0; i < perf; ++i) in.performance.push_back(gen_score(rng));
  const int other = static_cast<int>(rng.below(3));
  for (int i = 0; i < other; ++i) in.other.push_back(gen_score(rng));
  if (ensure_nonempty && in.empty()) {
    in.other.push_back(gen_score(rng));
  }
  return in;
}

std::string show_two_tier(const TwoTierInput& in) {
  std::ostringstream os;
  os.precision(17);
  os << "gates=[";
  for (std::size_t i = 0; i < in.gates.size(); ++i) {
    if (i) os << ",";
    os << in.gates[i].score << (in.gates[i].passed ? "+" : "-");
  }
  os << "] quality=" << render_scores(in.quality)
     << " performance=" << render_scores(in.performance)
     << " other=" << render_scores(in.other);
  return os.str();
}

TypedCase<TwoTierInput> two_tier_case(
    std::function<bool(const TwoTierInput&)> holds) {
  TypedCase<TwoTierInput> tc;
  tc.gen = [](Rng& rng) { return gen_two_tier(rng); };
  tc.holds = std::move(holds);
  tc.show = show_two_tier;
  return tc;
}

// Graph fixtures -------------------------------------------------------------

TypedCase<GraphSpec> graph_case(std::function<bool(const GraphSpec&)> holds,
                                Topology topo = Topology::Mixed,
                                int max_nodes = 30) {
  TypedCase<GraphSpec> tc;
  tc.gen = [topo, max_nodes](Rng& rng) {
    return gen_graph_spec(rng, topo, max_nodes);
  };
  tc.holds = std::move(holds);
  tc.shrinks = [](const GraphSpec& s) { return shrink_graph_spec(s); };
  tc.show = render_graph_spec;
  return tc;
}

Property graph_prop(const char* name, Property p) {
  p.name = name;
  p.case_scale = 0.1;
  p.min_cases = 300;
  return p;
}

}  // namespace

void register_reff_properties(std::vector<Property>& out, const Env& env) {
  const char* cat = "r_eff_calculator";
  const Config cfg = env.cfg;
  auto add = [&](const char* name, Property p) {
    p.name = name;
    p.category = cat;
    out.push_back(std::move(p));
  };
  auto addp = [&](Property p) {
    p.category = cat;
    out.push_back(std::move(p));
  };

  // --- Evidence adjustment pipeline ---------------------------------------

  add("reff_adjust_value_in_bounds",
      make_property<EvCase>("", cat, PropMode::ForAll,
                            ev_case([cfg](const EvCase& c) {
                              auto adj = adjust_evidence(c.e, c.claim_scope,
                                                         c.now, cfg);
                              return adj.excluded ||
                                     (adj.value >= 0.0 && adj.value <= 1.0);
                            })));

  add("reff_adjust_never_exceeds_raw_times_multiplier",
      make_property<EvCase>("", cat, PropMode::ForAll,
                            ev_case([cfg](const EvCase& c) {
                              auto adj = adjust_evidence(c.e, c.claim_scope,
                                                         c.now, cfg);
                              return adj.excluded ||
                                     adj.value <=
                                         c.e.raw_score * cfg.multiplier(c.e.method);
                            })));

  add("reff_decay_fresh_is_one",
      make_property<EvCase>("", cat, PropMode::ForAll,
                            ev_case([cfg](const EvCase& c) {
                              EvCase fresh = c;
                              fresh.now = fresh.e.valid_until -
                                          static_cast<Timestamp>(1);
                              if (fresh.now < fresh.e.collected_at) {
                                fresh.now = fresh.e.collected_at;
                              }
                              return decay_factor(fresh.now, fresh.e.valid_until,
                                                  cfg.grace_duration()) == 1.0;
                            })));

  add("reff_decay_past_grace_is_zero",
      make_property<EvCase>(
          "", cat, PropMode::ForAll, ev_case([cfg](const EvCase& c) {
            const Timestamp past =
                c.e.valid_until + cfg.grace_duration() + days(1);
            EvCase stale = c;
            stale.now = past;
            auto adj =
                adjust_evidence(stale.e, stale.claim_scope, stale.now, cfg);
            return decay_factor(past, c.e.valid_until, cfg.grace_duration()) ==
                       0.0 &&
                   (adj.excluded || adj.value == 0.0);
          })));

  {
    TypedCase<EvCase> tc = ev_case([cfg](const EvCase& c) {
      const Timestamp grace = cfg.grace_duration();
      if (grace <= 0) return true;
      const Timestamp inside =
          c.e.valid_until + 1 + static_cast<Timestamp>(
                                    static_cast<std::uint64_t>(grace - 1) / 2);
      const double d = decay_factor(inside, c.e.valid_until, grace);
      const double expected =
          1.0 - static_cast<double>(inside - c.e.valid_until) /
                    static_cast<double>(grace);
      return d > 0.0 && d < 1.0 && std::fabs(d - expected) <= 1e-12;
    });
    add("reff_decay_linear_within_grace",
        make_property<EvCase>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    TypedCase<EvCase> tc;
    tc.gen = gen_ev_case;
    tc.holds = [cfg](const EvCase& c) {
      Rng r(static_cast<std::uint64_t>(c.now) ^ 0x5bd1e995);
      Timestamp t1 = c.e.collected_at + static_cast<Timestamp>(r.below(days(200)));
      Timestamp t2 = t1 + static_cast<Timestamp>(r.below(days(200)));
      return decay_factor(t1, c.e.valid_until, cfg.grace_duration()) >=
             decay_factor(t2, c.e.valid_until, cfg.grace_duration());
    };
    tc.show = show_ev_case;
    add("reff_decay_monotone_in_time",
        make_property<EvCase>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    Config binary = cfg;
    binary.grace_days = 0;
    add("reff_decay_zero_grace_is_binary_cutoff",
        make_property<EvCase>("", cat, PropMode::ForAll,
                              ev_case([binary](const EvCase& c) {
                                const double d =
                                    decay_factor(c.now, c.e.valid_until, 0);
                                return d == (c.now <= c.e.valid_until ? 1.0 : 0.0);
                              })));
  }

  add("reff_none_match_is_excluded",
      make_property<EvCase>("", cat, PropMode::ForAll,
                            ev_case([cfg](const EvCase& c) {
                              EvCase forced = c;
                              forced.claim_scope = Scope::of({{"env", "prod"}});
                              forced.e.scope = Scope::of({{"env", "dev"}});
                              auto adj = adjust_evidence(
                                  forced.e, forced.claim_scope, forced.now, cfg);
                              return adj.excluded;
                            })));

  // Forced-congruence pipeline checks.
  for (auto [level, name] :
       {std::pair{Congruence::CL3, "reff_cl3_no_penalty"},
        std::pair{Congruence::CL2, "reff_cl2_penalty_applied"},
        std::pair{Congruence::CL1, "reff_cl1_penalty_applied"}}) {
    Congruence want = level;
    TypedCase<EvCase> tc;
    tc.gen = [want](Rng& rng) {
      EvCase c = gen_ev_case(rng);
      c.e.provenance = "lab";  // keep the cap out of the exactness check
      force_match(rng, want, c.claim_scope, c.e.scope);
      return c;
    };
    tc.holds = [cfg, want](const EvCase& c) {
      auto adj = adjust_evidence(c.e, c.claim_scope, c.now, cfg);
      if (adj.excluded || adj.match != want) return false;
      const double expected =
          expected_pipeline(cfg, c.e, cfg.penalty(want), adj.decay);
      return adj.value == expected;
    };
    tc.show = show_ev_case;
    add(name, make_property<EvCase>("", cat, PropMode::ForAll, std::move(tc)));
  }

  add("reff_penalty_floor_never_negative",
      make_property<EvCase>("", cat, PropMode::ForAll,
                            ev_case([cfg](const EvCase& c) {
                              auto adj = adjust_evidence(c.e, c.claim_scope,
                                                         c.now, cfg);
                              return adj.excluded || adj.value >= 0.0;
                            })));

  add("reff_multiplier_ordering_monotone",
      make_property<EvCase>(
          "", cat, PropMode::ForAll, ev_case([cfg](const EvCase& c) {
            double prev = -1.0;
            for (int m = 0; m < kVerificationCount; ++m) {
              EvCase v = c;
              v.e.method = static_cast<Verification>(m);
              auto adj = adjust_evidence(v.e, v.claim_scope, v.now, cfg);
              if (adj.excluded) return true;
              if (adj.value < prev) return false;
              prev = adj.value;
            }
            return true;
          })));

  {
    TypedCase<EvCase> tc;
    tc.gen = [](Rng& rng) {
      EvCase c = gen_ev_case(rng);
      c.e.provenance = "lab";
      c.claim_scope = c.e.scope;           // CL3
      c.now = c.e.collected_at;            // fresh
      return c;
    };
    tc.holds = [cfg](const EvCase& c) {
      auto adj = adjust_evidence(c.e, c.claim_scope, c.now, cfg);
      return !adj.excluded &&
             adj.value == c.e.raw_score * cfg.multiplier(c.e.method);
    };
    tc.show = show_ev_case;
    add("reff_multiplier_exact_when_fresh_cl3",
        make_property<EvCase>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    Config capped = cfg;
    capped.llm_generated_cap = 0.39;
    TypedCase<EvCase> tc;
    tc.gen = [](Rng& rng) {
      EvCase c = gen_ev_case(rng);
      c.e.provenance = "llm-generated trace";
      return c;
    };
    tc.holds = [capped](const EvCase& c) {
      auto adj = adjust_evidence(c.e, c.claim_scope, c.now, capped);
      return adj.excluded || adj.value <= *capped.llm_generated_cap;
    };
    tc.show = show_ev_case;
    add("reff_llm_cap_enforced",
        make_property<EvCase>("", cat, PropMode::ForAll, std::move(tc)));

    Config uncapped = cfg;
    uncapped.llm_generated_cap.reset();
    TypedCase<EvCase> tc2;
    tc2.gen = [](Rng& rng) {
      EvCase c = gen_ev_case(rng);
      c.e.provenance = "llm-generated trace";
      return c;
    };
    tc2.holds = [capped, uncapped](const EvCase& c) {
      auto with = adjust_evidence(c.e, c.claim_scope, c.now, capped);
      auto without = adjust_evidence(c.e, c.claim_scope, c.now, uncapped);
      if (with.excluded != without.excluded) return false;
      if (with.excluded) return true;
      if (without.value <= *capped.llm_generated_cap) {
        return with.value == without.value;
      }
      return with.value == *capped.llm_generated_cap;
    };
    tc2.show = show_ev_case;
    add("reff_llm_cap_is_exact_min",
        make_property<EvCase>("", cat, PropMode::ForAll, std::move(tc2)));

    TypedCase<EvCase> tc3;
    tc3.gen = [](Rng& rng) {
      EvCase c = gen_ev_case(rng);
      c.e.provenance = "bench log";
      return c;
    };
    tc3.holds = [capped, uncapped](const EvCase& c) {
      auto with = adjust_evidence(c.e, c.claim_scope, c.now, capped);
      auto without = adjust_evidence(c.e, c.claim_scope, c.now, uncapped);
      return with.excluded == without.excluded &&
             (with.excluded || with.value == without.value);
    };
    tc3.show = show_ev_case;
    add("reff_llm_cap_ignores_other_provenance",
        make_property<EvCase>("", cat, PropMode::ForAll, std::move(tc3)));
  }

  // --- Single-claim Eq. 1 ---------------------------------------------------

  add("reff_bare_claim_is_min_of_ceilings",
      make_property<SingleClaim>(
          "", cat, PropMode::ForAll,
          single_case(env, [](const Env& e, const SingleClaim& s) {
            SingleClaim bare = s;
            bare.evidence.clear();
            const double r = env_score_single(e, bare);
            return r == std::min(e.cfg.ceiling(bare.layer),
                                 e.cfg.ceiling(bare.formality));
          })));

  add("reff_single_leq_layer_ceiling",
      make_property<SingleClaim>(
          "", cat, PropMode::ForAll,
          single_case(env, [](const Env& e, const SingleClaim& s) {
            return env_score_single(e, s) <= e.cfg.ceiling(s.layer);
          })));

  add("reff_single_leq_formality_ceiling",
      make_property<SingleClaim>(
          "", cat, PropMode::ForAll,
          single_case(env, [](const Env& e, const SingleClaim& s) {
            return env_score_single(e, s) <= e.cfg.ceiling(s.formality);
          })));

  add("reff_single_leq_min_adjusted_evidence",
      make_property<SingleClaim>(
          "", cat, PropMode::ForAll,
          single_case(env, [](const Env& e, const SingleClaim& s) {
            const double r = env_score_single(e, s);
            for (const auto& ev : s.evidence) {
              bool excluded = false;
              const double adj =
                  oracle_adjust(ev, s.scope, s.now, e.cfg, excluded);
              if (!excluded && r > adj) return false;
            }
            return true;
          })));

  add("reff_all_excluded_evidence_behaves_bare",
      make_property<SingleClaim>(
          "", cat, PropMode::ForAll,
          single_case(env, [](const Env& e, const SingleClaim& s) {
            SingleClaim forced = s;
            forced.scope = Scope::of({{"env", "prod"}});
            for (auto& ev : forced.evidence) {
              ev.scope = Scope::of({{"env", "dev"}});
            }
            const double r = env_score_single(e, forced);
            return r == std::min(e.cfg.ceiling(forced.layer),
                                 e.cfg.ceiling(forced.formality));
          })));

  add("reff_single_matches_oracle",
      make_property<SingleClaim>(
          "", cat, PropMode::ForAll,
          single_case(env, [](const Env& e, const SingleClaim& s) {
            KnowledgeGraph g = build_single(s);
            Env engine = e;
            const double r = engine.score_all(g, s.now).at("c-0");
            if (e.inject == Inject::MeanReff) {
              return r == mean_mutant_score_all(g, e.cfg, s.now).at("c-0");
            }
            return r == oracle_score_all(g, e.cfg, s.now).at("c-0");
          })));

  add("reff_single_in_bounds",
      make_property<SingleClaim>(
          "", cat, PropMode::ForAll,
          single_case(env, [](const Env& e, const SingleClaim& s) {
            const double r = env_score_single(e, s);
            return r >= 0.0 && r <= 1.0;
          })));

  add("reff_single_mono_raising_evidence",
      make_property<SingleClaim>(
          "", cat, PropMode::ForAll,
          single_case(env, [](const Env& e, const SingleClaim& s) {
            if (s.evidence.empty()) return true;
            const double before = env_score_single(e, s);
            SingleClaim raised = s;
            Evidence& ev = raised.evidence[0];
            ev.raw_score = std::min(1.0, ev.raw_score + 0.25);
            return env_score_single(e, raised) >= before;
          })));

  add("reff_single_comm_evidence_order",
      make_property<SingleClaim>(
          "", cat, PropMode::ForAll,
          single_case(env, [](const Env& e, const SingleClaim& s) {
            if (s.evidence.size() < 2) return true;
            std::vector<int> reversed(s.evidence.size());
            for (std::size_t i = 0; i < reversed.size(); ++i) {
              reversed[i] = static_cast<int>(reversed.size() - 1 - i);
            }
            return env_score_single(e, s) == env_score_single(e, s, reversed);
          })));

  {
    // explain() agrees with the computed score and its dominating term.
    TypedCase<SingleClaim> tc;
    tc.gen = [](Rng& rng) { return gen_single(rng); };
    tc.holds = [cfg](const SingleClaim& s) {
      KnowledgeGraph g = build_single(s);
      const double r = g.effective_reliability("c-0", cfg, s.now);
      const ReffBreakdown b = g.explain("c-0", cfg, s.now);
      if (b.r_eff != r) return false;
      if (b.terms.at(b.dominating).value != r) return false;
      for (const auto& t : b.terms) {
        if (t.kind == TermKind::EvidenceTerm && t.excluded) continue;
        if (t.value < r) return false;
      }
      return true;
    };
    tc.show = show_single;
    add("reff_explain_consistent_with_score",
        make_property<SingleClaim>("", cat, PropMode::ForAll, std::move(tc)));
  }

  add("reff_expired_matched_evidence_zeroes_claim",
      make_property<SingleClaim>(
          "", cat, PropMode::ForAll,
          single_case(env, [](const Env& e, const SingleClaim& s) {
            SingleClaim expired = s;
            Evidence dead;
            dead.raw_score = 0.9;
            dead.formality = Formality::F2;
            dead.scope = expired.scope;  // CL3, never excluded
            dead.method = Verification::ExecutedVerified;
            dead.role = EvidenceRole::Other;
            dead.collected_at = expired.now - days(400);
            dead.valid_until =
                expired.now - e.cfg.grace_duration() - days(2);
            dead.provenance = "old";
            if (dead.valid_until < dead.collected_at) {
              dead.collected_at = dead.valid_until - days(1);
            }
            expired.evidence.push_back(dead);
            return env_score_single(e, expired) == 0.0;
          })));

  // --- Config and presets ---------------------------------------------------

  {
    TypedCase<int> tc;
    tc.gen = [](Rng& rng) { return static_cast<int>(rng.below(3)); };
    tc.holds = [](const int& which) {
      const char* sources[] = {"", "  \n\t ", "{}"};
      const Config c = load_config(sources[which]);
      const Config d;
      return c.formality_ceiling == d.formality_ceiling &&
             c.layer_ceiling == d.layer_ceiling &&
             c.penalty_cl2 == d.penalty_cl2 && c.penalty_cl1 == d.penalty_cl1 &&
             c.verification_multiplier == d.verification_multiplier &&
             c.validity_days == d.validity_days && c.grace_days == d.grace_days;
    };
    tc.show = [](const int& w) { return "source #" + std::to_string(w); };
    add("cfg_empty_source_yields_defaults",
        make_property<int>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    TypedCase<std::string> tc;
    tc.gen = gen_valid_config_json;
    tc.holds = [](const std::string& text) {
      const Config c = load_config(text);
      for (int i = 0; i + 1 < kFormalityCount; ++i) {
        if (!(c.formality_ceiling[i] < c.formality_ceiling[i + 1])) return false;
      }
      for (int i = 0; i + 1 < kLayerCount; ++i) {
        if (!(c.layer_ceiling[i] < c.layer_ceiling[i + 1])) return false;
      }
      return true;
    };
    tc.show = [](const std::string& t) { return t; };
    add("cfg_random_valid_configs_accepted",
        make_property<std::string>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    // Swapping two adjacent ceilings must trip the ordering invariant.
    TypedCase<std::string> tc;
    tc.gen = [](Rng& rng) -> std::string {
      nlohmann::json j = nlohmann::json::parse(gen_valid_config_json(rng));
      if (rng.chance(0.5)) {
        auto& f = j["formality_ceilings"];
        const char* keys[] = {"F0", "F1", "F2", "F3"};
        const int i = static_cast<int>(rng.below(3));
        std::swap(f[keys[i]], f[keys[i + 1]]);
      } else {
        auto& l = j["layer_ceilings"];
        const char* keys[] = {"L0", "L1", "L2"};
        const int i = static_cast<int>(rng.below(2));
        std::swap(l[keys[i]], l[keys[i + 1]]);
      }
      return j.dump();
    };
    tc.holds = [](const std::string& text) {
      try {
        load_config(text);
        // A swap may produce an equal pair only if values collided; the
        // generator draws distinct values, so acceptance means the ordering
        // check failed to fire.
        return false;
      } catch (const Error& e) {
        return e.code() == Err::OrderingViolation;
      }
    };
    tc.show = [](const std::string& t) { return t; };
    add("cfg_ordering_violation_rejected",
        make_property<std::string>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    TypedCase<std::string> tc;
    tc.gen = [](Rng& rng) -> std::string {
      nlohmann::json j = nlohmann::json::parse(gen_valid_config_json(rng));
      switch (rng.below(4)) {
        case 0:
          j["formality_ceilings"]["F3"] = 1.5;
          break;
        case 1:
          j["layer_ceilings"]["L0"] = -0.25;
          break;
        case 2:
          j["verification_multipliers"]["self_reported"] = 0.0;
          break;
        default:
          j["congruence_penalties"]["CL1"] = -1.0;
          break;
      }
      return j.dump();
    };
    tc.holds = [](const std::string& text) {
      try {
        load_config(text);
        return false;
      } catch (const Error& e) {
        return e.code() == Err::RangeViolation;
      }
    };
    tc.show = [](const std::string& t) { return t; };
    add("cfg_range_violation_rejected",
        make_property<std::string>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    // Per-context overrides actually govern the ceilings.
    TypedCase<std::string> tc;
    tc.gen = gen_valid_config_json;
    tc.holds = [](const std::string& text) {
      const Config custom = load_config(text);
      SingleClaim s;
      s.layer = Layer::L0;
      s.formality = Formality::F3;
      s.scope = Scope::top();
      KnowledgeGraph g = build_single(s);
      const double r = g.effective_reliability("c-0", custom, s.now);
      return r == std::min(custom.ceiling(Layer::L0),
                           custom.ceiling(Formality::F3));
    };
    tc.show = [](const std::string& t) { return t; };
    add("cfg_override_governs_scoring",
        make_property<std::string>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    TypedCase<double> tc;
    tc.gen = [](Rng& rng) { return 0.05 + 0.2 * rng.uniform(); };
    tc.holds = [](const double& v) {
      nlohmann::json j;
      j["layer_ceilings"]["L0"] = v;
      const Config c = load_config(j.dump());
      const Config d;
      return c.layer_ceiling[0] == v &&
             c.formality_ceiling == d.formality_ceiling &&
             c.validity_days == d.validity_days;
    };
    tc.show = [](const double& v) { return "L0=" + std::to_string(v); };
    add("cfg_partial_source_inherits_defaults",
        make_property<double>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    TypedCase<double> tc;
    tc.gen = gen_boundary_score;
    tc.holds = [](const double& v) { return make_score(v) == v; };
    tc.show = [](const double& v) {
      std::ostringstream os;
      os.precision(17);
      os << v;
      return os.str();
    };
    add("make_score_accepts_valid_inputs",
        make_property<double>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    TypedCase<double> tc;
    tc.gen = [](Rng& rng) -> double {
      switch (rng.below(6)) {
        case 0:
          return std::numeric_limits<double>::quiet_NaN();
        case 1:
          return std::numeric_limits<double>::infinity();
        case 2:
          return -std::numeric_limits<double>::infinity();
        case 3:
          return 1.0 + rng.uniform();
        case 4:
          return -rng.uniform() - 1e-9;
        default:
          return std::nextafter(1.0, 2.0);
      }
    };
    tc.holds = [](const double& v) {
      try {
        make_score(v);
        return false;
      } catch (const Error& e) {
        return e.code() == Err::RangeViolation;
      }
    };
    tc.show = [](const double& v) {
      std::ostringstream os;
      os.precision(17);
      os << v;
      return os.str();
    };
    add("make_score_rejects_invalid_inputs",
        make_property<double>("", cat, PropMode::ForAll, std::move(tc)));
  }

  // --- Two-tier aggregation -------------------------------------------------

  {
    TypedCase<TwoTierInput> tc;
    tc.gen = [](Rng& rng) {
      TwoTierInput in = gen_two_tier(rng);
      if (in.gates.empty()) in.gates.push_back(GateOutcome{gen_score(rng), true});
      in.gates[rng.below(in.gates.size())].passed = false;
      return in;
    };
    tc.holds = [](const TwoTierInput& in) {
      return two_tier_aggregate(in).overall == 0.0;
    };
    tc.show = show_two_tier;
    add("twotier_failed_gate_forces_zero",
        make_property<TwoTierInput>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    TypedCase<TwoTierInput> tc;
    tc.gen = [](Rng& rng) {
      TwoTierInput in;
      const int n = 1 + static_cast<int>(rng.below(4));
      for (int i = 0; i < n; ++i) in.gates.push_back({gen_score(rng), true});
      return in;
    };
    tc.holds = [](const TwoTierInput& in) {
      double lo = 1.0;
      for (const auto& g : in.gates) lo = std::min(lo, g.score);
      const TwoTierResult r = two_tier_aggregate(in);
      return r.gate && *r.gate == lo && r.overall == lo;
    };
    tc.show = show_two_tier;
    add("twotier_gates_aggregate_with_min",
        make_property<TwoTierInput>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    TypedCase<std::vector<double>> tc;
    tc.gen = [](Rng& rng) { return gen_multiset(rng, 6); };
    tc.holds = [](const std::vector<double>& v) {
      return std::fabs(probabilistic_sum(v) - oracle_probabilistic_sum(v)) <=
             1e-12;
    };
    tc.shrinks = [](const std::vector<double>& v) {
      return shrink_score_vector(v);
    };
    tc.show = render_scores;
    add("twotier_quality_matches_direct_sum_oracle",
        make_property<std::vector<double>>("", cat, PropMode::ForAll,
                                           std::move(tc)));
  }

  {
    TypedCase<std::vector<double>> tc;
    tc.gen = [](Rng& rng) { return gen_multiset(rng, 6); };
    tc.holds = [](const std::vector<double>& v) {
      const double q = probabilistic_sum(v);
      for (double s : v) {
        if (q < s - 1e-12) return false;
      }
      return q <= 1.0;
    };
    tc.shrinks = [](const std::vector<double>& v) {
      return shrink_score_vector(v);
    };
    tc.show = render_scores;
    add("twotier_quality_dominates_each_input",
        make_property<std::vector<double>>("", cat, PropMode::ForAll,
                                           std::move(tc)));
  }

  {
    TypedCase<std::vector<double>> tc;
    tc.gen = [](Rng& rng) { return gen_multiset(rng, 6); };
    tc.holds = [](const std::vector<double>& v) {
      return std::fabs(conservative_owa(v) - oracle_conservative_owa(v)) <=
             1e-12;
    };
    tc.shrinks = [](const std::vector<double>& v) {
      return shrink_score_vector(v);
    };
    tc.show = render_scores;
    add("twotier_performance_matches_owa_oracle",
        make_property<std::vector<double>>("", cat, PropMode::ForAll,
                                           std::move(tc)));
  }

  {
    TypedCase<std::vector<double>> tc;
    tc.gen = [](Rng& rng) { return gen_multiset(rng, 6); };
    tc.holds = [](const std::vector<double>& v) {
      const double owa = conservative_owa(v);
      const double lo = *std::min_element(v.begin(), v.end());
      const double hi = *std::max_element(v.begin(), v.end());
      return owa >= lo - 1e-12 && owa <= hi + 1e-12;
    };
    tc.shrinks = [](const std::vector<double>& v) {
      return shrink_score_vector(v);
    };
    tc.show = render_scores;
    add("twotier_owa_between_min_and_max",
        make_property<std::vector<double>>("", cat, PropMode::ForAll,
                                           std::move(tc)));
  }

  {
    TypedCase<std::vector<double>> tc;
    tc.gen = [](Rng& rng) { return gen_multiset(rng, 6); };
    tc.holds = [](const std::vector<double>& v) {
      double mean = 0.0;
      for (double s : v) mean += s;
      mean /= static_cast<double>(v.size());
      return conservative_owa(v) <= mean + 1e-12;
    };
    tc.shrinks = [](const std::vector<double>& v) {
      return shrink_score_vector(v);
    };
    tc.show = render_scores;
    add("twotier_owa_is_conservative_vs_mean",
        make_property<std::vector<double>>("", cat, PropMode::ForAll,
                                           std::move(tc)));
  }

  {
    TypedCase<std::vector<double>> tc;
    tc.gen = [](Rng& rng) { return gen_multiset(rng, 6); };
    tc.holds = [](const std::vector<double>& v) {
      TwoTierInput in;
      in.other = v;
      return two_tier_aggregate(in).overall ==
             *std::min_element(v.begin(), v.end());
    };
    tc.shrinks = [](const std::vector<double>& v) {
      return shrink_score_vector(v);
    };
    tc.show = render_scores;
    add("twotier_other_role_uses_min",
        make_property<std::vector<double>>("", cat, PropMode::ForAll,
                                           std::move(tc)));
  }

  add("twotier_overall_leq_each_role",
      make_property<TwoTierInput>(
          "", cat, PropMode::ForAll, two_tier_case([](const TwoTierInput& in) {
            const TwoTierResult r = two_tier_aggregate(in);
            for (const auto& role :
                 {r.gate, r.quality, r.performance, r.other}) {
              if (role && r.overall > *role) return false;
            }
            return true;
          })));

  add("twotier_overall_in_bounds",
      make_property<TwoTierInput>(
          "", cat, PropMode::ForAll, two_tier_case([](const TwoTierInput& in) {
            const double r = two_tier_aggregate(in).overall;
            return r >= 0.0 && r <= 1.0;
          })));

  {
    TypedCase<int> tc;
    tc.gen = [](Rng& rng) { return static_cast<int>(rng.below(4)); };
    tc.holds = [](const int&) {
      try {
        two_tier_aggregate(TwoTierInput{});
        return false;
      } catch (const Error& e) {
        return e.code() == Err::EmptyEvidence;
      }
    };
    tc.show = [](const int&) { return std::string("empty input"); };
    add("twotier_empty_input_rejected",
        make_property<int>("", cat, PropMode::ForAll, std::move(tc)));
  }

  add("twotier_order_insensitive_within_roles",
      make_property<TwoTierInput>(
          "", cat, PropMode::ForAll, two_tier_case([](const TwoTierInput& in) {
            TwoTierInput rev = in;
            std::reverse(rev.gates.begin(), rev.gates.end());
            std::reverse(rev.quality.begin(), rev.quality.end());
            std::reverse(rev.performance.begin(), rev.performance.end());
            std::reverse(rev.other.begin(), rev.other.end());
            const TwoTierResult a = two_tier_aggregate(in);
            const TwoTierResult b = two_tier_aggregate(rev);
            return std::fabs(a.overall - b.overall) <= 1e-12;
          })));

  add("twotier_mono_raising_never_lowers",
      make_property<TwoTierInput>(
          "", cat, PropMode::ForAll, two_tier_case([](const TwoTierInput& in) {
            const double before = two_tier_aggregate(in).overall;
            TwoTierInput raised = in;
            auto bump = [](double v) { return std::min(1.0, v + 0.2); };
            for (auto& g : raised.gates) g.score = bump(g.score);
            for (auto& s : raised.quality) s = bump(s);
            for (auto& s : raised.performance) s = bump(s);
            for (auto& s : raised.other) s = bump(s);
            return two_tier_aggregate(raised).overall >= before - 1e-12;
          })));

  // --- Graph-propagated ------------------------------------------------------

  addp(graph_prop(
      "reff_graph_scores_in_bounds",
      make_property<GraphSpec>("", cat, PropMode::ForAll,
                               graph_case([env](const GraphSpec& spec) {
                                 KnowledgeGraph g = build_graph(spec);
                                 Env e = env;
                                 for (const auto& [id, r] :
                                      e.score_all(g, spec.now)) {
                                   (void)id;
                                   if (!(r >= 0.0 && r <= 1.0)) return false;
                                 }
                                 return true;
                               }))));

  addp(graph_prop(
      "reff_graph_wlnk_bound_per_claim",
      make_property<GraphSpec>(
          "", cat, PropMode::ForAll, graph_case([env](const GraphSpec& spec) {
            KnowledgeGraph g = build_graph(spec);
            Env e = env;
            const auto scores = e.score_all(g, spec.now);
            for (const auto& id : g.claim_ids()) {
              const ClaimNode c = g.claim(id);
              const double r = scores.at(id);
              if (r > e.cfg.ceiling(c.layer) || r > e.cfg.ceiling(c.formality)) {
                return false;
              }
              for (const auto& eid : c.evidence_refs) {
                bool excluded = false;
                const double adj = oracle_adjust(g.evidence(eid), c.scope,
                                                 spec.now, e.cfg, excluded);
                if (!excluded && r > adj) return false;
              }
              for (const auto& did : c.dependency_refs) {
                const ClaimNode dep = g.claim(did);
                const Congruence m = oracle_match_level(c.scope, dep.scope);
                double term = 0.0;
                if (m != Congruence::None) {
                  double penalty = 0.0;
                  if (m == Congruence::CL2) penalty = e.cfg.penalty_cl2;
                  if (m == Congruence::CL1) penalty = e.cfg.penalty_cl1;
                  term = std::max(0.0, scores.at(did) - penalty);
                }
                if (r > term) return false;
              }
            }
            return true;
          }))));

  addp(graph_prop(
      "reff_graph_leq_layer_ceiling",
      make_property<GraphSpec>(
          "", cat, PropMode::ForAll, graph_case([env](const GraphSpec& spec) {
            KnowledgeGraph g = build_graph(spec);
            Env e = env;
            const auto scores = e.score_all(g, spec.now);
            for (const auto& id : g.claim_ids()) {
              if (scores.at(id) > e.cfg.ceiling(g.claim(id).layer)) return false;
            }
            return true;
          }))));

  addp(graph_prop(
      "reff_graph_leq_formality_ceiling",
      make_property<GraphSpec>(
          "", cat, PropMode::ForAll, graph_case([env](const GraphSpec& spec) {
            KnowledgeGraph g = build_graph(spec);
            Env e = env;
            const auto scores = e.score_all(g, spec.now);
            for (const auto& id : g.claim_ids()) {
              if (scores.at(id) > e.cfg.ceiling(g.claim(id).formality)) {
                return false;
              }
            }
            return true;
          }))));

  addp(graph_prop(
      "reff_graph_equals_full_recompute_oracle",
      make_property<GraphSpec>(
          "", cat, PropMode::ForAll, graph_case([env](const GraphSpec& spec) {
            KnowledgeGraph g = build_graph(spec);
            Env e = env;
            const auto got = e.score_all(g, spec.now);
            const auto want = oracle_score_all(g, e.cfg, spec.now);
            return got == want;
          }))));

  addp(graph_prop(
      "reff_graph_mono_raising_evidence",
      make_property<GraphSpec>(
          "", cat, PropMode::ForAll, graph_case([env](const GraphSpec& spec) {
            Env e = env;
            KnowledgeGraph g1 = build_graph(spec);
            const auto before = e.score_all(g1, spec.now);
            GraphSpec raised = spec;
            bool changed = false;
            for (auto& node : raised.nodes) {
              for (auto& ev : node.evidence) {
                if (!changed) {
                  ev.raw = std::min(1.0, ev.raw + 0.3);
                  changed = true;
                }
              }
            }
            if (!changed) return true;
            KnowledgeGraph g2 = build_graph(raised);
            const auto after = e.score_all(g2, spec.now);
            for (const auto& [id, r] : before) {
              if (after.at(id) < r) return false;
            }
            return true;
          }))));

  addp(graph_prop(
      "reff_graph_mono_lowering_evidence",
      make_property<GraphSpec>(
          "", cat, PropMode::ForAll, graph_case([env](const GraphSpec& spec) {
            Env e = env;
            KnowledgeGraph g1 = build_graph(spec);
            const auto before = e.score_all(g1, spec.now);
            GraphSpec lowered = spec;
            bool changed = false;
            for (auto& node : lowered.nodes) {
              for (auto& ev : node.evidence) {
                if (!changed) {
                  ev.raw = ev.raw / 2.0;
                  changed = true;
                }
              }
            }
            if (!changed) return true;
            KnowledgeGraph g2 = build_graph(lowered);
            const auto after = e.score_all(g2, spec.now);
            for (const auto& [id, r] : before) {
              if (after.at(id) > r) return false;
            }
            return true;
          }))));

  addp(graph_prop(
      "reff_graph_comm_insertion_order",
      make_property<GraphSpec>(
          "", cat, PropMode::ForAll, graph_case([env](const GraphSpec& spec) {
            Env e = env;
            KnowledgeGraph g1 = build_graph(spec);
            // Same spec with node evidence lists reversed: different
            // insertion order, same multiset.
            GraphSpec rev = spec;
            for (auto& node : rev.nodes) {
              std::reverse(node.evidence.begin(), node.evidence.end());
              std::reverse(node.deps.begin(), node.deps.end());
            }
            KnowledgeGraph g2 = build_graph(rev);
            const auto a = e.score_all(g1, spec.now);
            auto b = e.score_all(g2, spec.now);
            if (a.size() != b.size()) return false;
            for (const auto& [id, r] : a) {
              // Evidence ids renumber under reversal; compare claim scores.
              auto it = b.find(id);
              if (it == b.end() || it->second != r) return false;
            }
            return true;
          }))));

  {
    // A dependency whose scope cannot transfer blocks the dependent at 0.
    TypedCase<GraphSpec> tc;
    tc.gen = [](Rng& rng) {
      GraphSpec spec;
      spec.now = kBaseNow + static_cast<Timestamp>(rng.below(1000));
      spec.scope_pool = {Scope::of({{"env", "prod"}}),
                         Scope::of({{"env", "dev"}})};
      NodeSpec premise;
      premise.layer = Layer::L2;
      premise.formality = Formality::F2;
      premise.scope_idx = 1;
      NodeSpec dependent;
      dependent.layer = gen_layer(rng);
      dependent.formality = gen_formality(rng);
      dependent.scope_idx = 0;
      dependent.deps = {0};
      spec.nodes = {premise, dependent};
      return spec;
    };
    tc.holds = [env](const GraphSpec& spec) {
      KnowledgeGraph g = build_graph(spec);
      Env e = env;
      return e.score_all(g, spec.now).at(node_id(1)) == 0.0;
    };
    tc.show = render_graph_spec;
    Property p = make_property<GraphSpec>("", cat, PropMode::ForAll,
                                          std::move(tc));
    addp(graph_prop("reff_graph_none_dependency_blocks", std::move(p)));
  }

  addp(graph_prop(
      "reff_graph_dependency_penalty_term",
      make_property<GraphSpec>(
          "", cat, PropMode::ForAll,
          graph_case(
              [env](const GraphSpec& spec) {
                KnowledgeGraph g = build_graph(spec);
                Env e = env;
                const auto scores = e.score_all(g, spec.now);
                for (const auto& id : g.claim_ids()) {
                  const ClaimNode c = g.claim(id);
                  for (const auto& did : c.dependency_refs) {
                    const ClaimNode dep = g.claim(did);
                    const Congruence m = oracle_match_level(c.scope, dep.scope);
                    if (m == Congruence::None) {
                      if (scores.at(id) != 0.0) return false;
                      continue;
                    }
                    double penalty = 0.0;
                    if (m == Congruence::CL2) penalty = e.cfg.penalty_cl2;
                    if (m == Congruence::CL1) penalty = e.cfg.penalty_cl1;
                    if (scores.at(id) >
                        std::max(0.0, scores.at(did) - penalty)) {
                      return false;
                    }
                  }
                }
                return true;
              },
              Topology::RandomDag, 12))));

  {
    Config capped = cfg;
    capped.llm_generated_cap = 0.39;
    Env capped_env = env;
    capped_env.cfg = capped;
    addp(graph_prop(
        "reff_graph_llm_evidence_capped",
        make_property<GraphSpec>(
            "", cat, PropMode::ForAll,
            graph_case([capped_env](const GraphSpec& spec) {
              KnowledgeGraph g = build_graph(spec);
              Env e = capped_env;
              const auto scores = e.score_all(g, spec.now);
              for (const auto& id : g.claim_ids()) {
                const ClaimNode c = g.claim(id);
                for (const auto& eid : c.evidence_refs) {
                  const Evidence ev = g.evidence(eid);
                  bool excluded = false;
                  oracle_adjust(ev, c.scope, spec.now, e.cfg, excluded);
                  if (!excluded && ev.llm_generated() &&
                      scores.at(id) > *e.cfg.llm_generated_cap) {
                    return false;
                  }
                }
              }
              return true;
            }))));
  }

  addp(graph_prop(
      "reff_graph_time_advance_never_raises",
      make_property<GraphSpec>(
          "", cat, PropMode::ForAll, graph_case([env](const GraphSpec& spec) {
            Env e = env;
            KnowledgeGraph g1 = build_graph(spec);
            const auto before = e.score_all(g1, spec.now);
            KnowledgeGraph g2 = build_graph(spec);
            const auto after = e.score_all(g2, spec.now + days(17));
            for (const auto& [id, r] : before) {
              if (after.at(id) > r) return false;
            }
            return true;
          }))));

  addp(graph_prop(
      "reff_graph_sweep_flags_match_rule_oracle",
      make_property<GraphSpec>(
          "", cat, PropMode::ForAll, graph_case([cfg](const GraphSpec& spec) {
            KnowledgeGraph g = build_graph(spec);
            g.propagate(cfg, spec.now, PropagateMode::Full);

            // Independent flag-set computation from the rule statement.
            std::set<std::string> seeds;
            for (const auto& id : g.claim_ids()) {
              const ClaimNode c = g.claim(id);
              bool expired_qualifying = false;
              bool live_qualifying = false;
              for (const auto& eid : c.evidence_refs) {
                const Evidence ev = g.evidence(eid);
                const bool qualifying =
                    ev.method >= Verification::ScriptAttached &&
                    oracle_match_level(c.scope, ev.scope) != Congruence::None;
                if (!qualifying) continue;
                if (spec.now > ev.valid_until) {
                  expired_qualifying = true;
                } else {
                  live_qualifying = true;
                }
              }
              if (expired_qualifying) seeds.insert(id);
              if (c.layer == Layer::L2 && !live_qualifying) seeds.insert(id);
            }
            std::set<std::string> expected = seeds;
            bool grew = true;
            while (grew) {
              grew = false;
              for (const auto& id : g.claim_ids()) {
                if (expected.count(id)) continue;
                const ClaimNode c = g.claim(id);
                for (const auto& dep : c.dependency_refs) {
                  if (expected.count(dep)) {
                    expected.insert(id);
                    grew = true;
                    break;
                  }
                }
              }
            }

            const auto flagged = g.sweep_stale(cfg, spec.now);
            return std::set<std::string>(flagged.begin(), flagged.end()) ==
                   expected;
          }))));

  addp(graph_prop(
      "reff_graph_demotion_rule_exact",
      make_property<GraphSpec>(
          "", cat, PropMode::ForAll, graph_case([cfg](const GraphSpec& spec) {
            KnowledgeGraph g = build_graph(spec);
            std::map<std::string, Layer> before;
            std::map<std::string, bool> live_qualifying;
            for (const auto& id : g.claim_ids()) {
              const ClaimNode c = g.claim(id);
              before[id] = c.layer;
              bool live = false;
              for (const auto& eid : c.evidence_refs) {
                const Evidence ev = g.evidence(eid);
                if (ev.method >= Verification::ScriptAttached &&
                    oracle_match_level(c.scope, ev.scope) != Congruence::None &&
                    spec.now <= ev.valid_until) {
                  live = true;
                  break;
                }
              }
              live_qualifying[id] = live;
            }
            g.sweep_stale(cfg, spec.now);
            for (const auto& id : g.claim_ids()) {
              const Layer now_layer = g.claim(id).layer;
              if (before[id] == Layer::L2 && !live_qualifying[id]) {
                if (now_layer != Layer::L1) return false;
              } else if (now_layer != before[id]) {
                return false;
              }
            }
            return true;
          }))));

  addp(graph_prop(
      "reff_graph_bare_nodes_equal_ceiling_min",
      make_property<GraphSpec>(
          "", cat, PropMode::ForAll, graph_case([env](const GraphSpec& spec) {
            GraphSpec bare = spec;
            for (auto& node : bare.nodes) {
              node.evidence.clear();
              node.deps.clear();
            }
            KnowledgeGraph g = build_graph(bare);
            Env e = env;
            const auto scores = e.score_all(g, bare.now);
            for (std::size_t i = 0; i < bare.nodes.size(); ++i) {
              const NodeSpec& n = bare.nodes[i];
              const double want =
                  std::min(e.cfg.layer_ceiling[static_cast<int>(n.layer)],
                           e.cfg.formality_ceiling[static_cast<int>(n.formality)]);
              if (scores.at(node_id(static_cast<int>(i))) != want) return false;
            }
            return true;
          }))));
}

}  // namespace adi::harness
