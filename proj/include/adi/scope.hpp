#pragma once

#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "adi/core.hpp"

namespace adi {

// A scope is a finite set of dimension=value constraints forming a bounded
// lattice: TOP (no constraints, universal), BOTTOM (contradictory), and
// everything in between ordered by constraint inclusion. Constraints are kept
// in a sorted map so canonical serialization is byte-stable.
//
// Grammar (also the wire/CLI syntax, bit-exact):
//   scope      := "*" | "!" | constraint ("," constraint)*
//   constraint := dim "=" value
//   dim, value := [a-z0-9_.-]+
class Scope {
 public:
  using ConstraintMap = std::map<std::string, std::string>;

  Scope() = default;  // TOP

  static Scope top() { return Scope(); }
  static Scope bottom() {
    Scope s;
    s.bottom_ = true;
    return s;
  }
  // Validates tokens; throws ParseError on bad token or duplicate dimension.
  static Scope of(
      std::initializer_list<std::pair<std::string, std::string>> constraints);
  static Scope from_constraints(ConstraintMap constraints);

  bool is_top() const { return !bottom_ && constraints_.empty(); }
  bool is_bottom() const { return bottom_; }
  const ConstraintMap& constraints() const { return constraints_; }

  friend bool operator==(const Scope& a, const Scope& b) {
    return a.bottom_ == b.bottom_ && a.constraints_ == b.constraints_;
  }

 private:
  bool bottom_ = false;
  ConstraintMap constraints_;
};

// Throws ParseError carrying the byte offset of the first offending position.
Scope parse_scope(std::string_view text);

// Canonical form: dimensions sorted lexicographically; parse(serialize(s)) == s.
std::string serialize_scope(const Scope& s);

// Greatest lower bound: union of constraints; conflicting shared dimension
// forces BOTTOM.
Scope meet(const Scope& a, const Scope& b);

// Least upper bound: constraints on which both sides agree.
Scope join(const Scope& a, const Scope& b);

// Congruence of an evidence (or dependency) scope against a claim scope:
//   CL3  equal scopes
//   CL2  no conflicts and one side subsumes the other (comparable, incl. TOP)
//   CL1  conflicts but at least one shared dimension agrees, or
//        conflict-free yet incomparable (cross-cutting contexts)
//   NONE conflicts with no agreeing shared dimension, or either side BOTTOM
Congruence match_level(const Scope& claim_scope, const Scope& evidence_scope);

}  // namespace adi
