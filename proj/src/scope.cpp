#include "adi/scope.hpp"

#include <sstream>

#include "adi/error.hpp"

namespace adi {

namespace {

bool token_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '.' || c == '-';
}

bool valid_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!token_char(c)) return false;
  }
  return true;
}

[[noreturn]] void parse_fail(std::string_view text, std::size_t offset,
                             const std::string& reason) {
  std::ostringstream os;
  os << "scope parse error at byte " << offset << ": " << reason;
  throw Error(Err::ParseError, os.str(), std::string(text), offset);
}

}  // namespace

Scope Scope::of(
    std::initializer_list<std::pair<std::string, std::string>> constraints) {
  ConstraintMap m;
  for (const auto& [dim, value] : constraints) {
    if (!valid_token(dim) || !valid_token(value)) {
      raise(Err::ParseError,
            "scope tokens must match [a-z0-9_.-]+: '" + dim + "=" + value + "'");
    }
    if (!m.emplace(dim, value).second) {
      raise(Err::ParseError, "duplicate scope dimension '" + dim + "'");
    }
  }
  Scope s;
  s.constraints_ = std::move(m);
  return s;
}

Scope Scope::from_constraints(ConstraintMap constraints) {
  for (const auto& [dim, value] : constraints) {
    if (!valid_token(dim) || !valid_token(value)) {
      raise(Err::ParseError,
            "scope tokens must match [a-z0-9_.-]+: '" + dim + "=" + value + "'");
    }
  }
  Scope s;
  s.constraints_ = std::move(constraints);
  return s;
}

Scope parse_scope(std::string_view text) {
  if (text == "*") return Scope::top();
  if (text == "!") return Scope::bottom();
  if (text.empty()) parse_fail(text, 0, "empty scope (use '*' for universal)");

  Scope::ConstraintMap constraints;
  std::size_t pos = 0;
  while (true) {
    // dim
    std::size_t dim_start = pos;
    while (pos < text.size() && token_char(text[pos])) ++pos;
    if (pos == dim_start) {
      parse_fail(text, pos, "expected dimension name ([a-z0-9_.-]+)");
    }
    if (pos >= text.size() || text[pos] != '=') {
      parse_fail(text, pos, "expected '=' after dimension name");
    }
    std::string dim(text.substr(dim_start, pos - dim_start));
    ++pos;  // '='
    // value
    std::size_t val_start = pos;
    while (pos < text.size() && token_char(text[pos])) ++pos;
    if (pos == val_start) {
      parse_fail(text, pos, "expected value ([a-z0-9_.-]+)");
    }
    std::string value(text.substr(val_start, pos - val_start));

    if (constraints.count(dim) != 0) {
      parse_fail(text, dim_start, "duplicate dimension '" + dim + "'");
    }
    constraints.emplace(std::move(dim), std::move(value));

    if (pos == text.size()) break;
    if (text[pos] != ',') {
      parse_fail(text, pos, "expected ',' between constraints");
    }
    ++pos;
    if (pos == text.size()) {
      parse_fail(text, pos, "trailing ',' without constraint");
    }
  }

  Scope s;
  s = Scope::from_constraints(std::move(constraints));
  return s;
}

std::string serialize_scope(const Scope& s) {
  if (s.is_bottom()) return "!";
  if (s.is_top()) return "*";
  std::string out;
  bool first = true;
  for (const auto& [dim, value] : s.constraints()) {
    if (!first) out += ',';
    out += dim;
    out += '=';
    out += value;
    first = false;
  }
  return out;
}

Scope meet(const Scope& a, const Scope& b) {
  if (a.is_bottom() || b.is_bottom()) return Scope::bottom();
  Scope::ConstraintMap merged = a.constraints();
  for (const auto& [dim, value] : b.constraints()) {
    auto [it, inserted] = merged.emplace(dim, value);
    if (!inserted && it->second != value) return Scope::bottom();
  }
  return Scope::from_constraints(std::move(merged));
}

Scope join(const Scope& a, const Scope& b) {
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  Scope::ConstraintMap common;
  const auto& bc = b.constraints();
  for (const auto& [dim, value] : a.constraints()) {
    auto it = bc.find(dim);
    if (it != bc.end() && it->second == value) common.emplace(dim, value);
  }
  return Scope::from_constraints(std::move(common));
}

namespace {

// True when every constraint of `general` appears with the same value in
// `specific`, i.e. specific lies at or below general in the lattice.
bool subsumes(const Scope& specific, const Scope& general) {
  const auto& sc = specific.constraints();
  for (const auto& [dim, value] : general.constraints()) {
    auto it = sc.find(dim);
    if (it == sc.end() || it->second != value) return false;
  }
  return true;
}

}  // namespace

Congruence match_level(const Scope& claim_scope, const Scope& evidence_scope) {
  if (claim_scope.is_bottom() || evidence_scope.is_bottom()) {
    return Congruence::None;
  }
  if (claim_scope == evidence_scope) return Congruence::CL3;

  bool conflict = false;
  bool agreement = false;
  const auto& ec = evidence_scope.constraints();
  for (const auto& [dim, value] : claim_scope.constraints()) {
    auto it = ec.find(dim);
    if (it == ec.end()) continue;
    if (it->second == value) {
      agreement = true;
    } else {
      conflict = true;
    }
  }

  if (conflict) {
    return agreement ? Congruence::CL1 : Congruence::None;
  }
  if (subsumes(claim_scope, evidence_scope) ||
      subsumes(evidence_scope, claim_scope)) {
    return Congruence::CL2;
  }
  // Conflict-free but incomparable: cross-cutting contexts transfer with the
  // heavy penalty.
  return Congruence::CL1;
}

}  // namespace adi
