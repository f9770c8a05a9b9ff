#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "adi/core.hpp"

namespace adi {

// Aggregation operator family. GodelMin and Product are the compliant
// operators; Mean and Max are shipped as executable negative controls for the
// invariant checks.
enum class Op : std::uint8_t { GodelMin = 0, Product, Mean, Max };

std::string_view op_name(Op op);
Op parse_op(std::string_view token);

// Comparison slack: min/max return an input element bit-exactly and are
// compared exactly; product/mean accumulate rounding and get 1e-12.
double op_slack(Op op);

// Throws EmptyMultiset on an empty multiset and RangeViolation on any invalid
// score. Result is always a valid score.
double aggregate(Op op, std::span<const double> scores);

// Pointwise invariant checks.
bool check_idem(Op op, double sample);
bool check_comm(Op op, double a, double b);
bool check_wlnk(Op op, std::span<const double> scores);
// Requires a <= a_stronger.
bool check_mono(Op op, double a, double a_stronger, double b);

struct InvariantResult {
  bool pass = true;
  long cases_run = 0;
  std::optional<std::string> counterexample;
};

struct ComplianceReport {
  Op op = Op::GodelMin;
  std::uint64_t seed = 0;
  InvariantResult idem;
  InvariantResult comm;
  InvariantResult wlnk;
  InvariantResult mono;

  bool all_pass() const {
    return idem.pass && comm.pass && wlnk.pass && mono.pass;
  }
  std::string to_json() const;
};

// Runs the four pointwise checks over case_count random inputs each.
// Deterministic given seed; records the first counterexample per invariant.
// (LOC is a system-level invariant and is verified on the knowledge graph.)
ComplianceReport quintet_report(Op op, long case_count, std::uint64_t seed);

}  // namespace adi
