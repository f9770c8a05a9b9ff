#include "adi/harness/generators.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace adi::harness {

double gen_score(Rng& rng) {
  switch (rng.below(16)) {
    case 0:
      return 0.0;
    case 1:
      return 1.0;
    case 2:
      return 0x1p-1022;
    case 3:
      return 1.0 - 0x1p-53;
    default:
      return rng.uniform();
  }
}

double gen_boundary_score(Rng& rng) {
  switch (rng.below(8)) {
    case 0:
      return 0.0;
    case 1:
      return 1.0;
    case 2:
      return 0x1p-1074;  // smallest subnormal
    case 3:
      return 0x1p-1022;
    case 4:
      return 1.0 - 0x1p-53;
    case 5:
      return 0x1p-53;
    default:
      return rng.uniform();
  }
}

std::vector<double> gen_multiset(Rng& rng, std::size_t max_len) {
  std::size_t n = 1 + rng.below(max_len);
  std::vector<double> v(n);
  for (auto& s : v) s = gen_score(rng);
  return v;
}

namespace {

const char* kDims[] = {"env", "region", "task", "lang", "tier", "zone"};
const char* kValues[] = {"prod", "dev", "eu", "us", "a", "b", "multihop", "py"};

}  // namespace

Scope gen_scope(Rng& rng, bool allow_bottom) {
  const std::uint64_t roll = rng.below(20);
  if (roll == 0) return Scope::top();
  if (allow_bottom && roll == 1) return Scope::bottom();
  Scope::ConstraintMap m;
  const std::uint64_t n = 1 + rng.below(4);
  for (std::uint64_t i = 0; i < n; ++i) {
    m[kDims[rng.below(6)]] = kValues[rng.below(8)];
  }
  return Scope::from_constraints(std::move(m));
}

Verification gen_method(Rng& rng) {
  return static_cast<Verification>(rng.below(4));
}
EvidenceRole gen_role(Rng& rng) { return static_cast<EvidenceRole>(rng.below(4)); }
Formality gen_formality(Rng& rng) { return static_cast<Formality>(rng.below(4)); }
Layer gen_layer(Rng& rng) { return static_cast<Layer>(rng.below(3)); }

std::string gen_valid_config_json(Rng& rng) {
  // Four strictly increasing ceilings in (0,1], etc. Drawing sorted distinct
  // values keeps the ordering invariant intact.
  auto sorted_scores = [&](int k) {
    std::vector<double> v(k);
    for (auto& x : v) x = 0.05 + 0.9 * rng.uniform();
    std::sort(v.begin(), v.end());
    for (int i = 1; i < k; ++i) {
      if (v[i] <= v[i - 1]) v[i] = std::min(1.0, v[i - 1] + 1e-6);
    }
    return v;
  };
  auto f = sorted_scores(4);
  auto l = sorted_scores(3);
  nlohmann::json j;
  j["formality_ceilings"] = {{"F0", f[0]}, {"F1", f[1]}, {"F2", f[2]}, {"F3", f[3]}};
  j["layer_ceilings"] = {{"L0", l[0]}, {"L1", l[1]}, {"L2", l[2]}};
  j["congruence_penalties"] = {{"CL2", 0.5 * rng.uniform()},
                               {"CL1", 0.5 + 0.5 * rng.uniform()}};
  j["verification_multipliers"] = {{"self_reported", 0.2 + 0.3 * rng.uniform()},
                                   {"script_attached", 0.5 + 0.3 * rng.uniform()},
                                   {"externally_reviewed", 0.8 + 0.15 * rng.uniform()},
                                   {"executed_verified", 1.0}};
  long base = 1 + static_cast<long>(rng.below(40));
  j["validity_days"] = {{"F0", base},
                        {"F1", base + 1 + static_cast<long>(rng.below(60))},
                        {"F2", base + 70 + static_cast<long>(rng.below(100))},
                        {"F3", base + 200 + static_cast<long>(rng.below(300))}};
  j["grace_days"] = static_cast<long>(rng.below(60));
  if (rng.chance(0.3)) j["llm_generated_cap"] = rng.uniform();
  return j.dump();
}

std::string mutate_string(Rng& rng, const std::string& input) {
  std::string s = input;
  const int edits = 1 + static_cast<int>(rng.below(3));
  for (int e = 0; e < edits; ++e) {
    if (s.empty()) {
      s.push_back(static_cast<char>(rng.below(128)));
      continue;
    }
    switch (rng.below(5)) {
      case 0: {  // flip one byte
        std::size_t i = rng.below(s.size());
        s[i] = static_cast<char>(1 + rng.below(126));
        break;
      }
      case 1: {  // delete a span
        std::size_t i = rng.below(s.size());
        std::size_t len = 1 + rng.below(4);
        s.erase(i, len);
        break;
      }
      case 2: {  // insert noise
        std::size_t i = rng.below(s.size() + 1);
        static const char* noise = "=,*!{}\"0.e-";
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(i),
                 noise[rng.below(11)]);
        break;
      }
      case 3: {  // duplicate a span
        std::size_t i = rng.below(s.size());
        std::size_t len = std::min<std::size_t>(1 + rng.below(6), s.size() - i);
        s.insert(i, s.substr(i, len));
        break;
      }
      default: {  // truncate
        s.resize(rng.below(s.size() + 1));
        break;
      }
    }
  }
  return s;
}

// --- Graph specifications -------------------------------------------------

std::string node_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "c%03d", index);
  return buf;
}

std::string evidence_id(int node, int k) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "e%03dx%d", node, k);
  return buf;
}

namespace {

EvidenceSpec gen_evidence_spec(Rng& rng, int scope_pool_size) {
  EvidenceSpec e;
  e.raw = gen_score(rng);
  e.method = gen_method(rng);
  e.role = gen_role(rng);
  e.scope_idx = static_cast<int>(rng.below(scope_pool_size));
  e.formality = gen_formality(rng);
  e.age_days = static_cast<long>(rng.below(40));
  // Mostly live evidence; some expired, some inside a decay ramp.
  e.life_days = static_cast<long>(rng.below(60));
  e.llm = rng.chance(0.15);
  return e;
}

std::vector<Scope> gen_scope_pool(Rng& rng, bool uniform) {
  std::vector<Scope> pool;
  pool.push_back(Scope::top());
  if (uniform) return pool;
  const int extra = 1 + static_cast<int>(rng.below(4));
  for (int i = 0; i < extra; ++i) pool.push_back(gen_scope(rng, false));
  return pool;
}

}  // namespace

GraphSpec gen_graph_spec(Rng& rng, Topology topology, int max_nodes,
                         bool uniform_scope) {
  GraphSpec spec;
  spec.now = 1'700'000'000 + static_cast<Timestamp>(rng.below(1'000'000));
  spec.scope_pool = gen_scope_pool(rng, uniform_scope);
  const int pool_n = static_cast<int>(spec.scope_pool.size());

  Topology topo = topology;
  if (topology == Topology::Mixed) {
    topo = static_cast<Topology>(rng.below(3));
  }

  int n = 0;
  switch (topo) {
    case Topology::Chain:
      n = 2 + static_cast<int>(rng.below(std::max(1, max_nodes - 1)));
      break;
    case Topology::Diamond:
      n = 4;
      break;
    default:
      n = 1 + static_cast<int>(rng.below(max_nodes));
      break;
  }

  spec.nodes.resize(n);
  for (int i = 0; i < n; ++i) {
    NodeSpec& node = spec.nodes[i];
    node.layer = gen_layer(rng);
    node.formality = gen_formality(rng);
    node.scope_idx = uniform_scope ? 0 : static_cast<int>(rng.below(pool_n));
    const int ev = static_cast<int>(rng.below(3));
    for (int k = 0; k < ev; ++k) {
      node.evidence.push_back(gen_evidence_spec(rng, pool_n));
    }
  }

  switch (topo) {
    case Topology::Chain:
      // Node i depends on node i-1; the root of the chain is the last node.
      for (int i = 1; i < n; ++i) spec.nodes[i].deps.push_back(i - 1);
      break;
    case Topology::Diamond:
      spec.nodes[1].deps.push_back(0);
      spec.nodes[2].deps.push_back(0);
      spec.nodes[3].deps = {1, 2};
      break;
    default:
      // Edges point to earlier indices only: acyclic by construction, tuned
      // toward ~2 average out-degree.
      for (int i = 1; i < n; ++i) {
        const int tries = static_cast<int>(rng.below(4));
        for (int t = 0; t < tries; ++t) {
          int dep = static_cast<int>(rng.below(i));
          auto& deps = spec.nodes[i].deps;
          if (std::find(deps.begin(), deps.end(), dep) == deps.end()) {
            deps.push_back(dep);
          }
        }
      }
      break;
  }
  return spec;
}

KnowledgeGraph build_graph(const GraphSpec& spec) {
  KnowledgeGraph g;
  g.set_clock(spec.now);
  for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
    const NodeSpec& node = spec.nodes[i];
    for (std::size_t k = 0; k < node.evidence.size(); ++k) {
      const EvidenceSpec& es = node.evidence[k];
      Evidence e;
      e.id = evidence_id(static_cast<int>(i), static_cast<int>(k));
      e.raw_score = es.raw;
      e.formality = es.formality;
      e.scope = spec.scope_pool[static_cast<std::size_t>(es.scope_idx) %
                                spec.scope_pool.size()];
      e.method = es.method;
      e.role = es.role;
      e.collected_at = spec.now - days(es.age_days);
      e.valid_until = e.collected_at + days(es.life_days);
      e.provenance = es.llm ? "llm-generated run" : "measured";
      g.add_evidence(std::move(e));
    }
  }
  for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
    const NodeSpec& node = spec.nodes[i];
    ClaimNode c;
    c.id = node_id(static_cast<int>(i));
    c.statement = "generated claim " + std::to_string(i);
    c.layer = node.layer;
    c.formality = node.formality;
    c.scope = spec.scope_pool[static_cast<std::size_t>(node.scope_idx) %
                              spec.scope_pool.size()];
    c.proposer = ActorId{"gen-0", ActorKind::Generator};
    c.phase = Phase::Abduction;
    for (std::size_t k = 0; k < node.evidence.size(); ++k) {
      c.evidence_refs.insert(evidence_id(static_cast<int>(i), static_cast<int>(k)));
    }
    for (int dep : node.deps) {
      c.dependency_refs.insert(node_id(dep));
    }
    g.add_claim(std::move(c));
  }
  return g;
}

std::vector<GraphSpec> shrink_graph_spec(const GraphSpec& spec) {
  std::vector<GraphSpec> out;
  const int n = static_cast<int>(spec.nodes.size());
  // Drop a node, rewiring dependents past it.
  if (n > 1) {
    for (int drop = 0; drop < n; ++drop) {
      GraphSpec s = spec;
      s.nodes.erase(s.nodes.begin() + drop);
      for (auto& node : s.nodes) {
        std::vector<int> deps;
        for (int d : node.deps) {
          if (d == drop) continue;
          deps.push_back(d > drop ? d - 1 : d);
        }
        node.deps = std::move(deps);
      }
      out.push_back(std::move(s));
    }
  }
  // Drop an edge.
  for (int i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < spec.nodes[i].deps.size(); ++d) {
      GraphSpec s = spec;
      s.nodes[i].deps.erase(s.nodes[i].deps.begin() +
                            static_cast<std::ptrdiff_t>(d));
      out.push_back(std::move(s));
    }
  }
  // Drop an evidence item.
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < spec.nodes[i].evidence.size(); ++k) {
      GraphSpec s = spec;
      s.nodes[i].evidence.erase(s.nodes[i].evidence.begin() +
                                static_cast<std::ptrdiff_t>(k));
      out.push_back(std::move(s));
    }
  }
  // Shrink an evidence score.
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < spec.nodes[i].evidence.size(); ++k) {
      for (double v : shrink_score(spec.nodes[i].evidence[k].raw)) {
        GraphSpec s = spec;
        s.nodes[i].evidence[k].raw = v;
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::string render_graph_spec(const GraphSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "graph{now=" << spec.now;
  for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
    const NodeSpec& nd = spec.nodes[i];
    os << "; " << node_id(static_cast<int>(i)) << " "
       << layer_name(nd.layer) << "/" << formality_name(nd.formality)
       << " scope=" << serialize_scope(spec.scope_pool[
              static_cast<std::size_t>(nd.scope_idx) % spec.scope_pool.size()]);
    if (!nd.deps.empty()) {
      os << " deps=[";
      for (std::size_t d = 0; d < nd.deps.size(); ++d) {
        if (d) os << ",";
        os << node_id(nd.deps[d]);
      }
      os << "]";
    }
    for (std::size_t k = 0; k < nd.evidence.size(); ++k) {
      const EvidenceSpec& e = nd.evidence[k];
      os << " ev(raw=" << e.raw << ",method=" << verification_name(e.method)
         << ",age=" << e.age_days << "d,life=" << e.life_days << "d"
         << (e.llm ? ",llm" : "") << ")";
    }
  }
  os << "}";
  return os.str();
}

// --- Command sequences ------------------------------------------------------

const std::vector<ActorId>& actor_pool() {
  static const std::vector<ActorId> pool = {
      ActorId{"gen-0", ActorKind::Generator},
      ActorId{"gen-1", ActorKind::Generator},
      ActorId{"ver-0", ActorKind::Verifier},
      ActorId{"hum-0", ActorKind::Human},
  };
  return pool;
}

const std::vector<Scope>& seq_scope_pool() {
  static const std::vector<Scope> pool = {
      Scope::top(),
      Scope::of({{"env", "prod"}}),
      Scope::of({{"env", "dev"}}),
      Scope::of({{"env", "prod"}, {"region", "eu"}}),
  };
  return pool;
}

CmdSeq gen_cmd_seq(Rng& rng, int max_len) {
  const int n = 1 + static_cast<int>(rng.below(max_len));
  CmdSeq seq(n);
  for (Cmd& c : seq) {
    c.kind = static_cast<Cmd::Kind>(rng.below(Cmd::kCount));
    c.actor = static_cast<int>(rng.below(actor_pool().size()));
    c.claim_a = static_cast<int>(rng.below(64));
    c.claim_b = static_cast<int>(rng.below(64));
    c.scope_idx = static_cast<int>(rng.below(seq_scope_pool().size()));
    c.score = gen_score(rng);
    c.method = static_cast<int>(rng.below(4));
    c.life_days = 1 + static_cast<long>(rng.below(90));
    c.advance_days = 1 + static_cast<long>(rng.below(30));
  }
  return seq;
}

std::vector<CmdSeq> shrink_cmd_seq(const CmdSeq& seq) {
  std::vector<CmdSeq> out;
  if (seq.size() <= 1) return out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    CmdSeq smaller;
    smaller.reserve(seq.size() - 1);
    for (std::size_t j = 0; j < seq.size(); ++j) {
      if (j != i) smaller.push_back(seq[j]);
    }
    out.push_back(std::move(smaller));
  }
  return out;
}

std::string render_cmd_seq(const CmdSeq& seq) {
  static const char* kKindNames[] = {
      "propose",      "promote", "promote-skip", "promote-self", "ratify",
      "add-evidence", "link",    "contradict",   "sweep",        "advance"};
  std::ostringstream os;
  os << "seq[";
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) os << " ";
    os << kKindNames[seq[i].kind] << "(a=" << seq[i].actor
       << ",c=" << seq[i].claim_a << ")";
  }
  os << "]";
  return os.str();
}

}  // namespace adi::harness
