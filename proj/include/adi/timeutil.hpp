#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace adi {

// Timestamps are UTC seconds since the Unix epoch. The wire/CLI format is
// RFC 3339 `YYYY-MM-DDTHH:MM:SSZ` (UTC only, whole seconds).
using Timestamp = std::int64_t;

constexpr std::int64_t kSecondsPerDay = 86400;

// Throws ParseError (with byte offset) on malformed input.
Timestamp parse_rfc3339(std::string_view text);

std::string format_rfc3339(Timestamp t);

constexpr Timestamp days(std::int64_t n) { return n * kSecondsPerDay; }

}  // namespace adi
