#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adi/rng.hpp"

namespace adi::harness {

// ForAll properties fail on any violating case; Exists properties pass once a
// witness turns up (the executable form of "a counterexample for operator X
// is found within N cases").
enum class PropMode { ForAll, Exists };

struct Property {
  std::string name;
  std::string category;
  PropMode mode = PropMode::ForAll;
  // Concurrency-driving targets run outside the parallel case loop.
  bool serial_only = false;
  // Requested case count is scaled per property (graph-building cases cost
  // orders of magnitude more than scalar ones) and clamped.
  double case_scale = 1.0;
  long min_cases = 1;
  long max_cases = 0;  // 0 = unbounded

  // Evaluates one case derived from the seed. ForAll: true = invariant held.
  // Exists: true = witness found. Never throws.
  std::function<bool(std::uint64_t)> run;
  // Regenerates the case at the seed, shrinks it greedily to a local minimum
  // and renders it.
  std::function<std::string(std::uint64_t)> describe;

  long scaled_cases(long requested) const {
    long n = static_cast<long>(static_cast<double>(requested) * case_scale);
    if (n < min_cases) n = min_cases;
    if (max_cases > 0 && n > max_cases) n = max_cases;
    return n;
  }
};

template <typename T>
struct TypedCase {
  std::function<T(Rng&)> gen;
  std::function<bool(const T&)> holds;
  // Single-step shrink candidates; empty/default disables shrinking.
  std::function<std::vector<T>(const T&)> shrinks;
  std::function<std::string(const T&)> show;
};

template <typename T>
Property make_property(std::string name, std::string category, PropMode mode,
                       TypedCase<T> tc) {
  Property p;
  p.name = std::move(name);
  p.category = std::move(category);
  p.mode = mode;

  auto gen = tc.gen;
  auto holds = tc.holds;
  auto shrinks = tc.shrinks;
  auto show = tc.show;

  // A case that throws counts as a violation (never as a witness).
  auto safe_holds = [holds](const T& x) -> bool {
    try {
      return holds(x);
    } catch (...) {
      return false;
    }
  };

  p.run = [gen, safe_holds](std::uint64_t seed) -> bool {
    try {
      Rng rng(seed);
      T x = gen(rng);
      return safe_holds(x);
    } catch (...) {
      return false;
    }
  };

  p.describe = [gen, safe_holds, shrinks, show,
                mode](std::uint64_t seed) -> std::string {
    Rng rng(seed);
    T x = gen(rng);
    auto interesting = [&](const T& v) {
      const bool h = safe_holds(v);
      return mode == PropMode::ForAll ? !h : h;
    };
    if (shrinks) {
      // Greedy descent to a fixpoint: at the end no single-step shrink stays
      // interesting, i.e. the result is locally minimal.
      bool progress = true;
      while (progress) {
        progress = false;
        std::vector<T> candidates = shrinks(x);
        for (T& cand : candidates) {
          if (interesting(cand)) {
            x = std::move(cand);
            progress = true;
            break;
          }
        }
      }
    }
    return show ? show(x) : "seed=" + std::to_string(seed);
  };

  return p;
}

// Shrink steps for scores: zero it, then halve (halving bottoms out at 0
// through the subnormals, so the descent terminates).
std::vector<double> shrink_score(double x);

// Removals first, then elementwise score shrinks.
std::vector<std::vector<double>> shrink_score_vector(
    const std::vector<double>& v);

std::string render_scores(const std::vector<double>& v);

std::uint64_t fnv1a64(std::string_view s);

}  // namespace adi::harness
