#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adi/core.hpp"
#include "adi/fsm.hpp"
#include "adi/scope.hpp"
#include "adi/timeutil.hpp"

namespace adi {

class KnowledgeGraph;

struct DrrStepEvidence {
  std::string id;
  std::string provenance;
};

struct DrrStep {
  std::string claim_id;
  std::string mode;  // abduction | deduction | induction
  Layer layer = Layer::L0;
  std::vector<DrrStepEvidence> evidence;
};

// Append-only, hash-chained audit record of a finalized decision. this_hash
// digests the canonical serialization (sorted-key compact JSON) of every
// field except this_hash itself, prev_hash included.
struct DesignRationaleRecord {
  std::string id;
  std::string decision;
  std::vector<DrrStep> steps;
  double final_r_eff = 0.0;
  Scope scope_spec;
  Timestamp valid_from = 0;
  Timestamp valid_until = 0;
  ActorId ratifier;
  std::string supersedes;  // empty unless this record replaces an earlier DRR
  std::string prev_hash;
  std::string this_hash;

  std::string canonical_body() const;  // serialization hashed into this_hash
};

constexpr const char* kGenesisHash =
    "0000000000000000000000000000000000000000000000000000000000000000";

// Append-only store of DRRs with a self-describing one-line header
// {format_version, digest_algorithm}. Raw lines are retained so that
// verify_chain can localize corruption even when a record no longer parses.
class DrrStore {
 public:
  struct VerifyResult {
    bool ok = true;
    bool header_ok = true;
    // Record index (0-based, header excluded) of the first bad record.
    std::size_t first_bad = 0;
    std::string reason;
  };

  DrrStore();

  int format_version() const { return format_version_; }
  const std::string& digest_algorithm() const { return digest_algorithm_; }

  std::size_t size() const { return records_.size(); }
  const DesignRationaleRecord& record(std::size_t i) const {
    return records_.at(i);
  }
  const std::vector<DesignRationaleRecord>& records() const { return records_; }

  // Fills prev_hash/this_hash, validates the record invariants
  // (non-BOTTOM scope, non-empty window, mode/layer consistency) and appends.
  const DesignRationaleRecord& append(DesignRationaleRecord record);

  // Most recent record whose final step names claim_id; used to thread
  // supersedes links when a claim is re-ratified.
  std::optional<std::string> latest_for_claim(const std::string& claim_id) const;

  VerifyResult verify_chain() const;

  void save(std::ostream& out) const;
  void save_file(const std::string& path) const;
  // Tolerant load: header must parse; record lines are kept raw and parsed
  // best-effort so a corrupted store still loads for verification.
  static DrrStore load(std::istream& in);
  static DrrStore load_file(const std::string& path);

  // Appends a single record line to an existing store file.
  void append_to_file(const std::string& path,
                      const DesignRationaleRecord& record) const;
  static void init_file(const std::string& path);

 private:
  int format_version_ = 1;
  std::string digest_algorithm_ = "sha256";
  bool header_ok_ = true;
  std::string raw_header_;
  std::vector<DesignRationaleRecord> records_;
  std::vector<std::string> raw_lines_;  // record lines exactly as stored
  std::vector<bool> parsed_ok_;
};

// Builds the record for a ratifiable claim by walking its promotion history.
// Errors propagate from the ratification preconditions; EmptyHistory if the
// claim carries no recorded steps.
DesignRationaleRecord finalize_drr(KnowledgeGraph& graph, DrrStore& store,
                                   const std::string& claim_id,
                                   const ActorId& ratifier,
                                   Timestamp valid_from, Timestamp valid_until,
                                   const Config& cfg);

}  // namespace adi
