#include "adi/core.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace adi {

using nlohmann::json;

bool is_valid_score(double value) noexcept {
  return std::isfinite(value) && value >= 0.0 && value <= 1.0;
}

double make_score(double value) {
  if (!is_valid_score(value)) {
    std::ostringstream os;
    os << "reliability score must be a finite value in [0,1], got " << value;
    raise(Err::RangeViolation, os.str());
  }
  return value;
}

namespace {

template <std::size_t N>
int lookup(const std::string_view (&names)[N], std::string_view token,
           const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == token) return static_cast<int>(i);
  }
  raise(Err::ParseError, std::string("unknown ") + what + ": '" +
                             std::string(token) + "'");
}

constexpr std::string_view kFormalityNames[] = {"F0", "F1", "F2", "F3"};
constexpr std::string_view kLayerNames[] = {"L0", "L1", "L2"};
constexpr std::string_view kCongruenceNames[] = {"CL3", "CL2", "CL1", "NONE"};
constexpr std::string_view kVerificationNames[] = {
    "self_reported", "script_attached", "externally_reviewed",
    "executed_verified"};
constexpr std::string_view kRoleNames[] = {"gate", "performance", "quality",
                                           "other"};

}  // namespace

std::string_view formality_name(Formality f) {
  return kFormalityNames[static_cast<int>(f)];
}
std::string_view layer_name(Layer l) { return kLayerNames[static_cast<int>(l)]; }
std::string_view congruence_name(Congruence c) {
  return kCongruenceNames[static_cast<int>(c)];
}
std::string_view verification_name(Verification v) {
  return kVerificationNames[static_cast<int>(v)];
}
std::string_view role_name(EvidenceRole r) {
  return kRoleNames[static_cast<int>(r)];
}

Formality parse_formality(std::string_view token) {
  return static_cast<Formality>(lookup(kFormalityNames, token, "formality level"));
}
Layer parse_layer(std::string_view token) {
  return static_cast<Layer>(lookup(kLayerNames, token, "epistemic layer"));
}
Verification parse_verification(std::string_view token) {
  return static_cast<Verification>(
      lookup(kVerificationNames, token, "verification method"));
}
EvidenceRole parse_role(std::string_view token) {
  return static_cast<EvidenceRole>(lookup(kRoleNames, token, "evidence role"));
}

double Config::penalty(Congruence c) const {
  switch (c) {
    case Congruence::CL3:
      return 0.0;
    case Congruence::CL2:
      return penalty_cl2;
    case Congruence::CL1:
      return penalty_cl1;
    case Congruence::None:
      break;
  }
  raise(Err::RangeViolation, "NONE congruence carries no penalty; it excludes");
}

void Config::validate() const {
  for (double c : formality_ceiling) {
    if (!is_valid_score(c)) {
      raise(Err::RangeViolation, "formality ceiling outside [0,1]");
    }
  }
  for (double c : layer_ceiling) {
    if (!is_valid_score(c)) {
      raise(Err::RangeViolation, "layer ceiling outside [0,1]");
    }
  }
  for (int i = 0; i + 1 < kFormalityCount; ++i) {
    if (!(formality_ceiling[i] < formality_ceiling[i + 1])) {
      raise(Err::OrderingViolation,
            "formality ceilings must strictly increase F0 < F1 < F2 < F3",
            std::string(kFormalityNames[i + 1]));
    }
  }
  for (int i = 0; i + 1 < kLayerCount; ++i) {
    if (!(layer_ceiling[i] < layer_ceiling[i + 1])) {
      raise(Err::OrderingViolation,
            "layer ceilings must strictly increase L0 < L1 < L2",
            std::string(kLayerNames[i + 1]));
    }
  }
  if (!(penalty_cl2 >= 0.0) || !std::isfinite(penalty_cl2) ||
      !(penalty_cl1 >= 0.0) || !std::isfinite(penalty_cl1)) {
    raise(Err::RangeViolation, "congruence penalties must be finite and >= 0");
  }
  for (double m : verification_multiplier) {
    if (!std::isfinite(m) || !(m > 0.0) || !(m <= 1.0)) {
      raise(Err::RangeViolation, "verification multipliers must be in (0,1]");
    }
  }
  for (int i = 0; i < kFormalityCount; ++i) {
    if (validity_days[i] <= 0) {
      raise(Err::RangeViolation, "validity durations must be positive");
    }
    if (i + 1 < kFormalityCount && !(validity_days[i] < validity_days[i + 1])) {
      raise(Err::OrderingViolation,
            "validity durations must strictly increase with formality");
    }
  }
  if (grace_days < 0) {
    raise(Err::RangeViolation, "grace period must be >= 0");
  }
  const long counts[] = {pbt_cases.r_eff_calculator, pbt_cases.scope_algebra,
                         pbt_cases.epistemic_fsm, pbt_cases.graph_topology,
                         pbt_cases.dependency_inspector, pbt_cases.fuzz};
  for (long n : counts) {
    if (n < 1) raise(Err::RangeViolation, "pbt case counts must be >= 1");
  }
  if (llm_generated_cap && !is_valid_score(*llm_generated_cap)) {
    raise(Err::RangeViolation, "llm_generated_cap must be in [0,1]");
  }
}

namespace {

double get_score_field(const json& j, const std::string& context) {
  if (!j.is_number()) {
    raise(Err::ParseError, "config field " + context + " must be a number");
  }
  double v = j.get<double>();
  if (!is_valid_score(v)) {
    raise(Err::RangeViolation,
          "config field " + context + " must be a finite value in [0,1]");
  }
  return v;
}

std::int64_t get_int_field(const json& j, const std::string& context) {
  if (!j.is_number_integer()) {
    raise(Err::ParseError, "config field " + context + " must be an integer");
  }
  return j.get<std::int64_t>();
}

template <typename Fn>
void for_known_keys(const json& obj, const std::string& context,
                    std::initializer_list<std::string_view> keys, Fn&& fn) {
  if (!obj.is_object()) {
    raise(Err::ParseError, "config field " + context + " must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto k : keys) {
      if (key == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      raise(Err::ParseError,
            "unknown key '" + key + "' in config field " + context);
    }
    fn(key, value);
  }
}

}  // namespace

Config load_config(std::string_view json_text) {
  Config cfg;
  std::string trimmed(json_text);
  // Empty source keeps every default.
  bool blank = true;
  for (char c : trimmed) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') {
      blank = false;
      break;
    }
  }
  if (blank) {
    cfg.validate();
    return cfg;
  }

  json root = json::parse(trimmed, nullptr, false);
  if (root.is_discarded()) {
    raise(Err::ParseError, "configuration is not valid JSON");
  }
  if (!root.is_object()) {
    raise(Err::ParseError, "configuration root must be a JSON object");
  }

  for (const auto& [key, value] : root.items()) {
    if (key == "formality_ceilings") {
      for_known_keys(value, key, {"F0", "F1", "F2", "F3"},
                     [&](const std::string& k, const json& v) {
                       cfg.formality_ceiling[static_cast<int>(
                           parse_formality(k))] = get_score_field(v, key);
                     });
    } else if (key == "layer_ceilings") {
      for_known_keys(value, key, {"L0", "L1", "L2"},
                     [&](const std::string& k, const json& v) {
                       cfg.layer_ceiling[static_cast<int>(parse_layer(k))] =
                           get_score_field(v, key);
                     });
    } else if (key == "congruence_penalties") {
      for_known_keys(value, key, {"CL2", "CL1"},
                     [&](const std::string& k, const json& v) {
                       if (!v.is_number()) {
                         raise(Err::ParseError,
                               "congruence penalty must be a number");
                       }
                       double p = v.get<double>();
                       if (!std::isfinite(p) || p < 0.0) {
                         raise(Err::RangeViolation,
                               "congruence penalties must be >= 0");
                       }
                       (k == "CL2" ? cfg.penalty_cl2 : cfg.penalty_cl1) = p;
                     });
    } else if (key == "verification_multipliers") {
      for_known_keys(value, key,
                     {"self_reported", "script_attached",
                      "externally_reviewed", "executed_verified"},
                     [&](const std::string& k, const json& v) {
                       if (!v.is_number()) {
                         raise(Err::ParseError,
                               "verification multiplier must be a number");
                       }
                       cfg.verification_multiplier[static_cast<int>(
                           parse_verification(k))] = v.get<double>();
                     });
    } else if (key == "validity_days") {
      for_known_keys(value, key, {"F0", "F1", "F2", "F3"},
                     [&](const std::string& k, const json& v) {
                       cfg.validity_days[static_cast<int>(parse_formality(k))] =
                           get_int_field(v, key);
                     });
    } else if (key == "grace_days") {
      cfg.grace_days = get_int_field(value, key);
    } else if (key == "pbt_cases") {
      for_known_keys(value, key,
                     {"r_eff_calculator", "scope_algebra", "epistemic_fsm",
                      "graph_topology", "dependency_inspector", "fuzz"},
                     [&](const std::string& k, const json& v) {
                       long n = static_cast<long>(get_int_field(v, key));
                       if (k == "r_eff_calculator")
                         cfg.pbt_cases.r_eff_calculator = n;
                       else if (k == "scope_algebra")
                         cfg.pbt_cases.scope_algebra = n;
                       else if (k == "epistemic_fsm")
                         cfg.pbt_cases.epistemic_fsm = n;
                       else if (k == "graph_topology")
                         cfg.pbt_cases.graph_topology = n;
                       else if (k == "dependency_inspector")
                         cfg.pbt_cases.dependency_inspector = n;
                       else
                         cfg.pbt_cases.fuzz = n;
                     });
    } else if (key == "llm_generated_cap") {
      if (value.is_null()) {
        cfg.llm_generated_cap.reset();
      } else {
        cfg.llm_generated_cap = get_score_field(value, key);
      }
    } else {
      raise(Err::ParseError, "unknown configuration key '" + key + "'");
    }
  }

  cfg.validate();
  return cfg;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    raise(Err::IoError, "cannot open config file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

std::string config_to_json(const Config& cfg) {
  json j;
  for (int i = 0; i < kFormalityCount; ++i) {
    j["formality_ceilings"][std::string(kFormalityNames[i])] =
        cfg.formality_ceiling[i];
    j["validity_days"][std::string(kFormalityNames[i])] = cfg.validity_days[i];
  }
  for (int i = 0; i < kLayerCount; ++i) {
    j["layer_ceilings"][std::string(kLayerNames[i])] = cfg.layer_ceiling[i];
  }
  j["congruence_penalties"]["CL2"] = cfg.penalty_cl2;
  j["congruence_penalties"]["CL1"] = cfg.penalty_cl1;
  for (int i = 0; i < kVerificationCount; ++i) {
    j["verification_multipliers"][std::string(kVerificationNames[i])] =
        cfg.verification_multiplier[i];
  }
  j["grace_days"] = cfg.grace_days;
  j["pbt_cases"] = {{"r_eff_calculator", cfg.pbt_cases.r_eff_calculator},
                    {"scope_algebra", cfg.pbt_cases.scope_algebra},
                    {"epistemic_fsm", cfg.pbt_cases.epistemic_fsm},
                    {"graph_topology", cfg.pbt_cases.graph_topology},
                    {"dependency_inspector", cfg.pbt_cases.dependency_inspector},
                    {"fuzz", cfg.pbt_cases.fuzz}};
  if (cfg.llm_generated_cap) {
    j["llm_generated_cap"] = *cfg.llm_generated_cap;
  }
  return j.dump(2);
}

}  // namespace adi
