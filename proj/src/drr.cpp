#include "adi/drr.hpp"

#include <fstream>
#include <sstream>

#include "adi/error.hpp"
#include "adi/graph.hpp"
#include "adi/sha256.hpp"
#include "json.hpp"

namespace adi {

using nlohmann::json;

namespace {

json step_to_json(const DrrStep& s) {
  json ev = json::array();
  for (const auto& e : s.evidence) {
    ev.push_back(json{{"id", e.id}, {"provenance", e.provenance}});
  }
  return json{{"claim_id", s.claim_id},
              {"mode", s.mode},
              {"layer", std::string(layer_name(s.layer))},
              {"evidence", std::move(ev)}};
}

DrrStep step_from_json(const json& j) {
  DrrStep s;
  s.claim_id = j.at("claim_id").get<std::string>();
  s.mode = j.at("mode").get<std::string>();
  s.layer = parse_layer(j.at("layer").get<std::string>());
  for (const auto& e : j.at("evidence")) {
    s.evidence.push_back(DrrStepEvidence{e.at("id").get<std::string>(),
                                         e.at("provenance").get<std::string>()});
  }
  return s;
}

json record_body_json(const DesignRationaleRecord& r) {
  json steps = json::array();
  for (const auto& s : r.steps) steps.push_back(step_to_json(s));
  // nlohmann objects keep keys sorted, so dump() is the canonical form.
  return json{{"id", r.id},
              {"decision", r.decision},
              {"steps", std::move(steps)},
              {"final_r_eff", r.final_r_eff},
              {"scope_spec", serialize_scope(r.scope_spec)},
              {"valid_from", format_rfc3339(r.valid_from)},
              {"valid_until", format_rfc3339(r.valid_until)},
              {"ratifier", json{{"id", r.ratifier.id},
                                {"kind", std::string(actor_kind_name(
                                             r.ratifier.kind))}}},
              {"supersedes", r.supersedes},
              {"prev_hash", r.prev_hash}};
}

std::string record_line(const DesignRationaleRecord& r) {
  json j = record_body_json(r);
  j["this_hash"] = r.this_hash;
  return j.dump();
}

DesignRationaleRecord record_from_json(const json& j) {
  DesignRationaleRecord r;
  r.id = j.at("id").get<std::string>();
  r.decision = j.at("decision").get<std::string>();
  for (const auto& s : j.at("steps")) r.steps.push_back(step_from_json(s));
  r.final_r_eff = j.at("final_r_eff").get<double>();
  r.scope_spec = parse_scope(j.at("scope_spec").get<std::string>());
  r.valid_from = parse_rfc3339(j.at("valid_from").get<std::string>());
  r.valid_until = parse_rfc3339(j.at("valid_until").get<std::string>());
  r.ratifier.id = j.at("ratifier").at("id").get<std::string>();
  r.ratifier.kind =
      parse_actor_kind(j.at("ratifier").at("kind").get<std::string>());
  r.supersedes = j.at("supersedes").get<std::string>();
  r.prev_hash = j.at("prev_hash").get<std::string>();
  r.this_hash = j.at("this_hash").get<std::string>();
  return r;
}

json header_json(int version, const std::string& algorithm) {
  return json{{"digest_algorithm", algorithm}, {"format_version", version}};
}

void validate_record(const DesignRationaleRecord& r) {
  if (r.steps.empty()) {
    raise(Err::EmptyHistory, "DRR '" + r.id + "' has no inference steps");
  }
  if (r.scope_spec.is_bottom()) {
    raise(Err::RangeViolation,
          "DRR '" + r.id + "' has a contradictory scope; unfalsifiable");
  }
  if (!(r.valid_from < r.valid_until)) {
    raise(Err::RangeViolation,
          "DRR '" + r.id + "' validity window must be non-empty");
  }
  make_score(r.final_r_eff);
  for (const auto& s : r.steps) {
    const bool consistent = (s.mode == "abduction" && s.layer == Layer::L0) ||
                            (s.mode == "deduction" && s.layer == Layer::L1) ||
                            (s.mode == "induction" && s.layer == Layer::L2);
    if (!consistent) {
      raise(Err::RangeViolation,
            "DRR '" + r.id + "' step mode '" + s.mode +
                "' is inconsistent with layer " +
                std::string(layer_name(s.layer)));
    }
  }
}

}  // namespace

std::string DesignRationaleRecord::canonical_body() const {
  return record_body_json(*this).dump();
}

DrrStore::DrrStore() : raw_header_(header_json(1, "sha256").dump()) {}

const DesignRationaleRecord& DrrStore::append(DesignRationaleRecord record) {
  record.prev_hash =
      records_.empty() ? std::string(kGenesisHash) : records_.back().this_hash;
  record.this_hash.clear();
  validate_record(record);
  record.this_hash = sha256_hex(record.canonical_body());
  raw_lines_.push_back(record_line(record));
  parsed_ok_.push_back(true);
  records_.push_back(std::move(record));
  return records_.back();
}

std::optional<std::string> DrrStore::latest_for_claim(
    const std::string& claim_id) const {
  for (std::size_t i = records_.size(); i-- > 0;) {
    if (!parsed_ok_[i]) continue;
    const auto& r = records_[i];
    if (!r.steps.empty() && r.steps.back().claim_id == claim_id) {
      return r.id;
    }
  }
  return std::nullopt;
}

DrrStore::VerifyResult DrrStore::verify_chain() const {
  VerifyResult res;
  if (!header_ok_) {
    res.ok = false;
    res.header_ok = false;
    res.reason = "store header is corrupt";
    return res;
  }
  if (digest_algorithm_ != "sha256") {
    res.ok = false;
    res.header_ok = false;
    res.reason = "unsupported digest algorithm '" + digest_algorithm_ + "'";
    return res;
  }
  std::string expected_prev = kGenesisHash;
  for (std::size_t i = 0; i < raw_lines_.size(); ++i) {
    if (!parsed_ok_[i]) {
      return {false, true, i, "record does not parse"};
    }
    const DesignRationaleRecord& r = records_[i];
    // Stored lines are canonical dumps, so byte equality catches any
    // corruption, including flips that leave the JSON semantics intact.
    if (raw_lines_[i] != record_line(r)) {
      return {false, true, i, "record is not in canonical form"};
    }
    if (r.prev_hash != expected_prev) {
      return {false, true, i, "previous-hash link mismatch"};
    }
    if (r.this_hash != sha256_hex(r.canonical_body())) {
      return {false, true, i, "digest mismatch"};
    }
    expected_prev = r.this_hash;
  }
  return res;
}

void DrrStore::save(std::ostream& out) const {
  out << raw_header_ << '\n';
  for (const auto& line : raw_lines_) out << line << '\n';
}

void DrrStore::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Err::IoError, "cannot write DRR store: " + path);
  save(out);
}

DrrStore DrrStore::load(std::istream& in) {
  DrrStore store;
  std::string line;
  if (!std::getline(in, line)) {
    raise(Err::IoError, "DRR store is empty; missing header");
  }
  store.raw_header_ = line;
  json h = json::parse(line, nullptr, false);
  if (h.is_discarded() || !h.is_object() || !h.contains("format_version") ||
      !h.contains("digest_algorithm") ||
      !h.at("format_version").is_number_integer() ||
      !h.at("digest_algorithm").is_string() ||
      line != header_json(h.value("format_version", 0),
                          h.value("digest_algorithm", std::string{}))
                  .dump()) {
    store.header_ok_ = false;
  } else {
    store.format_version_ = h.at("format_version").get<int>();
    store.digest_algorithm_ = h.at("digest_algorithm").get<std::string>();
  }

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    store.raw_lines_.push_back(line);
    json j = json::parse(line, nullptr, false);
    bool ok = !j.is_discarded() && j.is_object();
    DesignRationaleRecord rec;
    if (ok) {
      try {
        rec = record_from_json(j);
      } catch (const Error&) {
        ok = false;
      } catch (const json::exception&) {
        ok = false;
      }
    }
    store.parsed_ok_.push_back(ok);
    store.records_.push_back(std::move(rec));
  }
  return store;
}

DrrStore DrrStore::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Err::IoError, "cannot open DRR store: " + path);
  return load(in);
}

void DrrStore::append_to_file(const std::string& path,
                              const DesignRationaleRecord& record) const {
  std::ofstream out(path, std::ios::app);
  if (!out) raise(Err::IoError, "cannot append to DRR store: " + path);
  out << record_line(record) << '\n';
}

void DrrStore::init_file(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Err::IoError, "cannot create DRR store: " + path);
  out << header_json(1, "sha256").dump() << '\n';
}

DesignRationaleRecord finalize_drr(KnowledgeGraph& graph, DrrStore& store,
                                   const std::string& claim_id,
                                   const ActorId& ratifier,
                                   Timestamp valid_from, Timestamp valid_until,
                                   const Config& cfg) {
  check_ratifiable(graph, claim_id, ratifier);
  const ClaimNode c = graph.claim(claim_id);
  if (c.history.empty()) {
    raise(Err::EmptyHistory,
          "claim '" + claim_id + "' has no recorded promotion history");
  }

  DesignRationaleRecord r;
  r.id = "drr-" + std::to_string(store.size() + 1);
  r.decision = c.statement;
  for (const HistoryStep& h : c.history) {
    DrrStep step;
    step.claim_id = c.id;
    step.mode = h.mode;
    step.layer = h.layer;
    for (const auto& eid : h.evidence_ids) {
      const Evidence e = graph.evidence(eid);
      step.evidence.push_back(DrrStepEvidence{e.id, e.provenance});
    }
    r.steps.push_back(std::move(step));
  }
  r.final_r_eff = graph.effective_reliability(claim_id, cfg, graph.clock());
  r.scope_spec = c.scope;
  r.valid_from = valid_from;
  r.valid_until = valid_until;
  r.ratifier = ratifier;
  if (auto prior = store.latest_for_claim(claim_id)) {
    r.supersedes = *prior;
  }
  return store.append(std::move(r));
}

}  // namespace adi
