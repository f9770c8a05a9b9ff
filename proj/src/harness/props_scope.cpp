#include <algorithm>

#include "adi/error.hpp"
#include "adi/harness/generators.hpp"
#include "adi/harness/oracles.hpp"
#include "adi/scope.hpp"
#include "registry.hpp"

namespace adi::harness {

namespace {

struct TwoScopes {
  Scope a, b;
};
struct ThreeScopes {
  Scope a, b, c;
};

std::vector<Scope> shrink_scope(const Scope& s) {
  std::vector<Scope> out;
  if (s.is_bottom()) {
    out.push_back(Scope::top());
    return out;
  }
  for (const auto& [dim, value] : s.constraints()) {
    (void)value;
    auto m = s.constraints();
    m.erase(dim);
    out.push_back(Scope::from_constraints(std::move(m)));
  }
  return out;
}

std::string show_scope(const Scope& s) { return serialize_scope(s); }

TypedCase<TwoScopes> two_scope_case(std::function<bool(const TwoScopes&)> holds) {
  TypedCase<TwoScopes> tc;
  tc.gen = [](Rng& rng) {
    return TwoScopes{gen_scope(rng, true), gen_scope(rng, true)};
  };
  tc.holds = std::move(holds);
  tc.shrinks = [](const TwoScopes& p) {
    std::vector<TwoScopes> out;
    for (Scope& s : shrink_scope(p.a)) out.push_back({std::move(s), p.b});
    for (Scope& s : shrink_scope(p.b)) out.push_back({p.a, std::move(s)});
    return out;
  };
  tc.show = [](const TwoScopes& p) {
    return "a=" + show_scope(p.a) + " b=" + show_scope(p.b);
  };
  return tc;
}

TypedCase<ThreeScopes> three_scope_case(
    std::function<bool(const ThreeScopes&)> holds) {
  TypedCase<ThreeScopes> tc;
  tc.gen = [](Rng& rng) {
    return ThreeScopes{gen_scope(rng, true), gen_scope(rng, true),
                       gen_scope(rng, true)};
  };
  tc.holds = std::move(holds);
  tc.show = [](const ThreeScopes& p) {
    return "a=" + show_scope(p.a) + " b=" + show_scope(p.b) +
           " c=" + show_scope(p.c);
  };
  return tc;
}

TypedCase<Scope> one_scope_case(std::function<bool(const Scope&)> holds,
                                bool allow_bottom = true) {
  TypedCase<Scope> tc;
  tc.gen = [allow_bottom](Rng& rng) { return gen_scope(rng, allow_bottom); };
  tc.holds = std::move(holds);
  tc.shrinks = [](const Scope& s) { return shrink_scope(s); };
  tc.show = show_scope;
  return tc;
}

// Random dimension/value with room for deliberate conflicts.
const char* dim_at(std::uint64_t i) {
  static const char* d[] = {"env", "region", "task", "lang"};
  return d[i % 4];
}
const char* val_at(std::uint64_t i) {
  static const char* v[] = {"prod", "dev", "eu", "us"};
  return v[i % 4];
}

}  // namespace

void register_scope_properties(std::vector<Property>& out, const Env& env) {
  (void)env;
  const char* cat = "scope_algebra";
  auto add = [&](const char* name, Property p) {
    p.name = name;
    p.category = cat;
    out.push_back(std::move(p));
  };

  add("scope_meet_commutative",
      make_property<TwoScopes>("", cat, PropMode::ForAll,
                               two_scope_case([](const TwoScopes& p) {
                                 return meet(p.a, p.b) == meet(p.b, p.a);
                               })));
  add("scope_join_commutative",
      make_property<TwoScopes>("", cat, PropMode::ForAll,
                               two_scope_case([](const TwoScopes& p) {
                                 return join(p.a, p.b) == join(p.b, p.a);
                               })));
  add("scope_meet_associative",
      make_property<ThreeScopes>(
          "", cat, PropMode::ForAll, three_scope_case([](const ThreeScopes& p) {
            return meet(meet(p.a, p.b), p.c) == meet(p.a, meet(p.b, p.c));
          })));
  add("scope_join_associative",
      make_property<ThreeScopes>(
          "", cat, PropMode::ForAll, three_scope_case([](const ThreeScopes& p) {
            return join(join(p.a, p.b), p.c) == join(p.a, join(p.b, p.c));
          })));
  add("scope_meet_idempotent",
      make_property<Scope>("", cat, PropMode::ForAll,
                           one_scope_case([](const Scope& s) {
                             return meet(s, s) == s;
                           })));
  add("scope_join_idempotent",
      make_property<Scope>("", cat, PropMode::ForAll,
                           one_scope_case([](const Scope& s) {
                             return join(s, s) == s;
                           })));
  add("scope_absorption_meet_over_join",
      make_property<TwoScopes>("", cat, PropMode::ForAll,
                               two_scope_case([](const TwoScopes& p) {
                                 return meet(p.a, join(p.a, p.b)) == p.a;
                               })));
  add("scope_absorption_join_over_meet",
      make_property<TwoScopes>("", cat, PropMode::ForAll,
                               two_scope_case([](const TwoScopes& p) {
                                 return join(p.a, meet(p.a, p.b)) == p.a;
                               })));
  add("scope_meet_top_identity",
      make_property<Scope>("", cat, PropMode::ForAll,
                           one_scope_case([](const Scope& s) {
                             return meet(s, Scope::top()) == s &&
                                    meet(Scope::top(), s) == s;
                           })));
  add("scope_join_bottom_identity",
      make_property<Scope>("", cat, PropMode::ForAll,
                           one_scope_case([](const Scope& s) {
                             return join(s, Scope::bottom()) == s &&
                                    join(Scope::bottom(), s) == s;
                           })));
  add("scope_meet_bottom_absorbs",
      make_property<Scope>("", cat, PropMode::ForAll,
                           one_scope_case([](const Scope& s) {
                             return meet(s, Scope::bottom()).is_bottom();
                           })));
  add("scope_join_top_absorbs",
      make_property<Scope>("", cat, PropMode::ForAll,
                           one_scope_case([](const Scope& s) {
                             return join(s, Scope::top()).is_top();
                           })));
  add("scope_roundtrip_parse_serialize",
      make_property<Scope>("", cat, PropMode::ForAll,
                           one_scope_case([](const Scope& s) {
                             return parse_scope(serialize_scope(s)) == s;
                           })));

  {
    // Non-canonical but valid text canonicalizes in one pass.
    TypedCase<std::string> tc;
    tc.gen = [](Rng& rng) -> std::string {
      const std::uint64_t n = 1 + rng.below(4);
      std::vector<std::string> parts;
      std::set<std::string> used;
      for (std::uint64_t i = 0; i < n; ++i) {
        std::string d = dim_at(rng.next_u64());
        if (!used.insert(d).second) continue;
        parts.push_back(d + "=" + val_at(rng.next_u64()));
      }
      // Deliberately unsorted order.
      for (std::size_t i = parts.size(); i > 1; --i) {
        std::swap(parts[i - 1], parts[rng.below(i)]);
      }
      std::string text;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) text += ',';
        text += parts[i];
      }
      return text;
    };
    tc.holds = [](const std::string& text) {
      const std::string once = serialize_scope(parse_scope(text));
      const std::string twice = serialize_scope(parse_scope(once));
      return once == twice;
    };
    tc.show = [](const std::string& t) { return t; };
    add("scope_canonicalization_idempotent",
        make_property<std::string>("", cat, PropMode::ForAll, std::move(tc)));
  }

  add("scope_match_symmetric",
      make_property<TwoScopes>("", cat, PropMode::ForAll,
                               two_scope_case([](const TwoScopes& p) {
                                 return match_level(p.a, p.b) ==
                                        match_level(p.b, p.a);
                               })));
  add("scope_match_self_cl3",
      make_property<Scope>("", cat, PropMode::ForAll,
                           one_scope_case(
                               [](const Scope& s) {
                                 return match_level(s, s) == Congruence::CL3;
                               },
                               /*allow_bottom=*/false)));
  add("scope_match_bottom_none",
      make_property<Scope>("", cat, PropMode::ForAll,
                           one_scope_case([](const Scope& s) {
                             return match_level(Scope::bottom(), s) ==
                                        Congruence::None &&
                                    match_level(s, Scope::bottom()) ==
                                        Congruence::None;
                           })));
  add("scope_match_equals_rule_table_oracle",
      make_property<TwoScopes>("", cat, PropMode::ForAll,
                               two_scope_case([](const TwoScopes& p) {
                                 return match_level(p.a, p.b) ==
                                        oracle_match_level(p.a, p.b);
                               })));

  {
    // Comparable conflict-free pairs (strict subsumption) land on CL2.
    TypedCase<TwoScopes> tc;
    tc.gen = [](Rng& rng) -> TwoScopes {
      Scope base = gen_scope(rng, false);
      auto m = base.constraints();
      // Extend with a fresh dimension to force strict subsumption.
      static const char* extra_dims[] = {"stage", "cluster", "shard"};
      m[extra_dims[rng.below(3)]] = val_at(rng.next_u64());
      Scope specific = Scope::from_constraints(std::move(m));
      return rng.chance(0.5) ? TwoScopes{base, specific}
                             : TwoScopes{specific, base};
    };
    tc.holds = [](const TwoScopes& p) {
      const bool comparable =
          oracle_scope_leq(p.a, p.b) || oracle_scope_leq(p.b, p.a);
      return comparable && match_level(p.a, p.b) == Congruence::CL2;
    };
    tc.show = [](const TwoScopes& p) {
      return "a=" + show_scope(p.a) + " b=" + show_scope(p.b);
    };
    add("scope_match_subsumption_is_cl2",
        make_property<TwoScopes>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    // Conflict plus an agreeing shared dimension lands on CL1.
    TypedCase<TwoScopes> tc;
    tc.gen = [](Rng& rng) -> TwoScopes {
      Scope::ConstraintMap ma, mb;
      ma["env"] = "prod";
      mb["env"] = "prod";  // agreement
      ma["region"] = "eu";
      mb["region"] = "us";  // conflict
      if (rng.chance(0.4)) ma["task"] = val_at(rng.next_u64());
      if (rng.chance(0.4)) mb["lang"] = val_at(rng.next_u64());
      return TwoScopes{Scope::from_constraints(std::move(ma)),
                       Scope::from_constraints(std::move(mb))};
    };
    tc.holds = [](const TwoScopes& p) {
      return match_level(p.a, p.b) == Congruence::CL1;
    };
    tc.show = [](const TwoScopes& p) {
      return "a=" + show_scope(p.a) + " b=" + show_scope(p.b);
    };
    add("scope_match_conflict_with_agreement_is_cl1",
        make_property<TwoScopes>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    // Pure conflict with no agreeing shared dimension lands on NONE.
    TypedCase<TwoScopes> tc;
    tc.gen = [](Rng& rng) -> TwoScopes {
      Scope::ConstraintMap ma, mb;
      ma["env"] = "prod";
      mb["env"] = "dev";
      if (rng.chance(0.5)) {
        ma["region"] = "eu";
        mb["region"] = "us";
      }
      return TwoScopes{Scope::from_constraints(std::move(ma)),
                       Scope::from_constraints(std::move(mb))};
    };
    tc.holds = [](const TwoScopes& p) {
      return match_level(p.a, p.b) == Congruence::None;
    };
    tc.show = [](const TwoScopes& p) {
      return "a=" + show_scope(p.a) + " b=" + show_scope(p.b);
    };
    add("scope_match_conflict_without_agreement_is_none",
        make_property<TwoScopes>("", cat, PropMode::ForAll, std::move(tc)));
  }

  add("scope_meet_is_lower_bound",
      make_property<TwoScopes>("", cat, PropMode::ForAll,
                               two_scope_case([](const TwoScopes& p) {
                                 const Scope m = meet(p.a, p.b);
                                 return oracle_scope_leq(m, p.a) &&
                                        oracle_scope_leq(m, p.b);
                               })));
  add("scope_join_is_upper_bound",
      make_property<TwoScopes>("", cat, PropMode::ForAll,
                               two_scope_case([](const TwoScopes& p) {
                                 const Scope u = join(p.a, p.b);
                                 return oracle_scope_leq(p.a, u) &&
                                        oracle_scope_leq(p.b, u);
                               })));

  {
    TypedCase<std::string> tc;
    tc.gen = [](Rng& rng) -> std::string {
      std::string d = dim_at(rng.next_u64());
      return d + "=" + val_at(rng.next_u64()) + "," + d + "=" +
             val_at(rng.next_u64());
    };
    tc.holds = [](const std::string& text) {
      try {
        parse_scope(text);
        return false;
      } catch (const Error& e) {
        return e.code() == Err::ParseError && e.offset() < text.size();
      }
    };
    tc.show = [](const std::string& t) { return t; };
    add("scope_parse_duplicate_dimension_rejected",
        make_property<std::string>("", cat, PropMode::ForAll, std::move(tc)));
  }

  {
    // Any parse error reports an offset within the input.
    TypedCase<std::string> tc;
    tc.gen = [](Rng& rng) -> std::string {
      Scope s = gen_scope(rng, true);
      return mutate_string(rng, serialize_scope(s));
    };
    tc.holds = [](const std::string& text) {
      try {
        Scope s = parse_scope(text);
        return parse_scope(serialize_scope(s)) == s;
      } catch (const Error& e) {
        return e.code() == Err::ParseError && e.offset() <= text.size();
      }
    };
    tc.show = [](const std::string& t) { return t; };
    add("scope_parse_error_offset_within_input",
        make_property<std::string>("", cat, PropMode::ForAll, std::move(tc)));
  }
}

}  // namespace adi::harness
