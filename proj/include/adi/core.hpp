#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "adi/error.hpp"
#include "adi/timeutil.hpp"

namespace adi {

// Reliability scores are plain doubles validated at every ingestion boundary:
// finite and inside [0,1], else RangeViolation. Returning the double keeps
// the arithmetic hot paths free of wrapper overhead; every constructor-like
// entry point funnels through make_score.
double make_score(double value);

bool is_valid_score(double value) noexcept;

enum class Formality : std::uint8_t { F0 = 0, F1, F2, F3 };
enum class Layer : std::uint8_t { L0 = 0, L1, L2 };
enum class Congruence : std::uint8_t { CL3 = 0, CL2, CL1, None };
enum class Verification : std::uint8_t {
  SelfReported = 0,
  ScriptAttached,
  ExternallyReviewed,
  ExecutedVerified,
};
enum class EvidenceRole : std::uint8_t { Gate = 0, Performance, Quality, Other };

constexpr int kFormalityCount = 4;
constexpr int kLayerCount = 3;
constexpr int kVerificationCount = 4;
constexpr int kRoleCount = 4;

// Token names used verbatim in config files, persistence and CLI flags.
std::string_view formality_name(Formality f);
std::string_view layer_name(Layer l);
std::string_view congruence_name(Congruence c);
std::string_view verification_name(Verification v);
std::string_view role_name(EvidenceRole r);

Formality parse_formality(std::string_view token);
Layer parse_layer(std::string_view token);
Verification parse_verification(std::string_view token);
EvidenceRole parse_role(std::string_view token);

// The six verification-suite categories, in report order.
struct PbtCases {
  long r_eff_calculator = 10000;
  long scope_algebra = 100000;
  long epistemic_fsm = 10000;
  long graph_topology = 1000;
  long dependency_inspector = 1000;
  long fuzz = 10000;
};

struct Config {
  std::array<double, kFormalityCount> formality_ceiling{0.70, 0.85, 0.95, 0.99};
  std::array<double, kLayerCount> layer_ceiling{0.35, 0.75, 1.00};
  double penalty_cl2 = 0.1;
  double penalty_cl1 = 0.4;
  std::array<double, kVerificationCount> verification_multiplier{0.60, 0.85,
                                                                 0.95, 1.00};
  std::array<std::int64_t, kFormalityCount> validity_days{30, 90, 180, 365};
  std::int64_t grace_days = 30;
  PbtCases pbt_cases;
  // Evidence-level cap applied to llm-generated provenance; absent = off.
  std::optional<double> llm_generated_cap;

  double ceiling(Formality f) const {
    return formality_ceiling[static_cast<int>(f)];
  }
  double ceiling(Layer l) const { return layer_ceiling[static_cast<int>(l)]; }
  // Congruence::None never reaches here: NONE-matched evidence is excluded
  // and NONE-matched dependency transfer is blocked outright.
  double penalty(Congruence c) const;
  double multiplier(Verification v) const {
    return verification_multiplier[static_cast<int>(v)];
  }
  Timestamp validity_duration(Formality f) const {
    return days(validity_days[static_cast<int>(f)]);
  }
  Timestamp grace_duration() const { return days(grace_days); }

  // Throws OrderingViolation / RangeViolation.
  void validate() const;
};

// Parses the JSON configuration schema. Omitted keys keep the defaults above;
// unknown keys, malformed values and ordering violations are rejected.
Config load_config(std::string_view json_text);
Config load_config_file(const std::string& path);

std::string config_to_json(const Config& cfg);

}  // namespace adi
