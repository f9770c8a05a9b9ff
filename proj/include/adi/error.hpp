#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adi {

enum class Err {
  RangeViolation,
  OrderingViolation,
  ParseError,
  EmptyMultiset,
  IllegalTransition,
  LayerSkip,
  SelfVerification,
  ContradictsValidated,
  InsufficientEvidence,
  SelfRatification,
  NotCorroborated,
  CycleDetected,
  MissingRef,
  DuplicateId,
  EmptyEvidence,
  EmptyHistory,
  IoError,
};

const char* err_name(Err code);

// Single exception type for all domain errors. `detail` carries the offending
// id/pair where an error message names one (ContradictsValidated names the
// conflicting claim, IllegalTransition the (phase,event) pair, ...); `offset`
// is the byte offset for ParseError.
class Error : public std::runtime_error {
 public:
  Error(Err code, std::string message, std::string detail = {},
        std::size_t offset = 0)
      : std::runtime_error(std::move(message)),
        code_(code),
        detail_(std::move(detail)),
        offset_(offset) {}

  Err code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Err code_;
  std::string detail_;
  std::size_t offset_;
};

[[noreturn]] inline void raise(Err code, std::string message,
                               std::string detail = {},
                               std::size_t offset = 0) {
  throw Error(code, std::move(message), std::move(detail), offset);
}

}  // namespace adi
