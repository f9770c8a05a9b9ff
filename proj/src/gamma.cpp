#include "adi/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "adi/error.hpp"
#include "adi/rng.hpp"
#include "json.hpp"

namespace adi {

namespace {

constexpr std::string_view kOpNames[] = {"min", "product", "mean", "max"};

void validate_scores(std::span<const double> scores) {
  for (double s : scores) make_score(s);
}

}  // namespace

std::string_view op_name(Op op) { return kOpNames[static_cast<int>(op)]; }

Op parse_op(std::string_view token) {
  for (int i = 0; i < 4; ++i) {
    if (kOpNames[i] == token) return static_cast<Op>(i);
  }
  raise(Err::ParseError, "unknown operator: '" + std::string(token) + "'");
}

double op_slack(Op op) {
  return (op == Op::Product || op == Op::Mean) ? 1e-12 : 0.0;
}

double aggregate(Op op, std::span<const double> scores) {
  if (scores.empty()) {
    raise(Err::EmptyMultiset, "aggregation over an empty multiset");
  }
  validate_scores(scores);
  switch (op) {
    case Op::GodelMin:
      return *std::min_element(scores.begin(), scores.end());
    case Op::Max:
      return *std::max_element(scores.begin(), scores.end());
    case Op::Product: {
      double p = 1.0;
      for (double s : scores) p *= s;
      return p;
    }
    case Op::Mean: {
      double sum = 0.0;
      for (double s : scores) sum += s;
      double m = sum / static_cast<double>(scores.size());
      // Guard the last-ulp rounding of the division; the mean of valid
      // scores lies in [0,1] exactly.
      return std::clamp(m, 0.0, 1.0);
    }
  }
  raise(Err::RangeViolation, "unreachable operator kind");
}

bool check_idem(Op op, double sample) {
  double got = aggregate(op, std::span<const double>(&sample, 1));
  return std::fabs(got - sample) <= op_slack(op);
}

bool check_comm(Op op, double a, double b) {
  const double ab[] = {a, b};
  const double ba[] = {b, a};
  return std::fabs(aggregate(op, ab) - aggregate(op, ba)) <= op_slack(op);
}

bool check_wlnk(Op op, std::span<const double> scores) {
  double got = aggregate(op, scores);
  double lo = *std::min_element(scores.begin(), scores.end());
  return got <= lo + op_slack(op);
}

bool check_mono(Op op, double a, double a_stronger, double b) {
  const double weak[] = {a, b};
  const double strong[] = {a_stronger, b};
  return aggregate(op, weak) <= aggregate(op, strong) + op_slack(op);
}

namespace {

double gen_score(Rng& rng) {
  // Sprinkle exact boundary values among the uniform draws.
  switch (rng.below(16)) {
    case 0:
      return 0.0;
    case 1:
      return 1.0;
    case 2:
      return 0x1p-1022;  // smallest normal
    case 3:
      return 1.0 - 0x1p-53;
    default:
      return rng.uniform();
  }
}

std::vector<double> gen_multiset(Rng& rng, std::size_t max_len = 8) {
  std::size_t n = 1 + rng.below(max_len);
  std::vector<double> v(n);
  for (auto& s : v) s = gen_score(rng);
  return v;
}

std::string render_multiset(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << "]";
  return os.str();
}

}  // namespace

ComplianceReport quintet_report(Op op, long case_count, std::uint64_t seed) {
  if (case_count < 1) {
    raise(Err::RangeViolation, "quintet case count must be >= 1");
  }
  ComplianceReport report;
  report.op = op;
  report.seed = seed;

  auto run = [&](InvariantResult& res, std::uint64_t stream,
                 auto&& one_case) {
    for (long i = 0; i < case_count; ++i) {
      Rng rng(mix_seed(seed, stream, static_cast<std::uint64_t>(i)));
      std::optional<std::string> cx = one_case(rng);
      ++res.cases_run;
      if (cx) {
        res.pass = false;
        res.counterexample = std::move(cx);
        break;
      }
    }
  };

  run(report.idem, 1, [&](Rng& rng) -> std::optional<std::string> {
    double x = gen_score(rng);
    if (check_idem(op, x)) return std::nullopt;
    std::ostringstream os;
    os.precision(17);
    os << "x=" << x << " gamma([x])="
       << aggregate(op, std::span<const double>(&x, 1));
    return os.str();
  });

  run(report.comm, 2, [&](Rng& rng) -> std::optional<std::string> {
    double a = gen_score(rng);
    double b = gen_score(rng);
    if (check_comm(op, a, b)) return std::nullopt;
    std::ostringstream os;
    os.precision(17);
    os << "a=" << a << " b=" << b;
    return os.str();
  });

  run(report.wlnk, 3, [&](Rng& rng) -> std::optional<std::string> {
    std::vector<double> s = gen_multiset(rng);
    if (check_wlnk(op, s)) return std::nullopt;
    std::ostringstream os;
    os.precision(17);
    os << "S=" << render_multiset(s) << " gamma=" << aggregate(op, s)
       << " min=" << *std::min_element(s.begin(), s.end());
    return os.str();
  });

  run(report.mono, 4, [&](Rng& rng) -> std::optional<std::string> {
    double a = gen_score(rng);
    double a2 = gen_score(rng);
    if (a > a2) std::swap(a, a2);
    double b = gen_score(rng);
    if (check_mono(op, a, a2, b)) return std::nullopt;
    std::ostringstream os;
    os.precision(17);
    os << "a=" << a << " a'=" << a2 << " b=" << b;
    return os.str();
  });

  return report;
}

std::string ComplianceReport::to_json() const {
  nlohmann::json j;
  j["operator"] = std::string(op_name(op));
  j["seed"] = seed;
  auto put = [&](const char* name, const InvariantResult& r) {
    nlohmann::json e;
    e["pass"] = r.pass;
    e["cases_run"] = r.cases_run;
    if (r.counterexample) e["counterexample"] = *r.counterexample;
    j["invariants"][name] = e;
  };
  put("IDEM", idem);
  put("COMM", comm);
  put("WLNK", wlnk);
  put("MONO", mono);
  j["all_pass"] = all_pass();
  return j.dump();
}

}  // namespace adi
