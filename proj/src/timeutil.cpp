#include "adi/timeutil.hpp"

#include <cstdio>
#include <ctime>

#include "adi/error.hpp"

namespace adi {

namespace {

bool all_digits(std::string_view s) {
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return !s.empty();
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace

Timestamp parse_rfc3339(std::string_view text) {
  // Strict YYYY-MM-DDTHH:MM:SSZ, UTC only.
  auto fail = [&](std::size_t offset, const char* why) {
    raise(Err::ParseError,
          std::string("invalid RFC 3339 timestamp: ") + why,
          std::string(text), offset);
  };
  if (text.size() != 20) fail(text.size(), "expected YYYY-MM-DDTHH:MM:SSZ");
  if (text[4] != '-') fail(4, "expected '-'");
  if (text[7] != '-') fail(7, "expected '-'");
  if (text[10] != 'T') fail(10, "expected 'T'");
  if (text[13] != ':') fail(13, "expected ':'");
  if (text[16] != ':') fail(16, "expected ':'");
  if (text[19] != 'Z') fail(19, "expected 'Z'");

  const std::string_view fields[6] = {text.substr(0, 4),  text.substr(5, 2),
                                      text.substr(8, 2),  text.substr(11, 2),
                                      text.substr(14, 2), text.substr(17, 2)};
  const std::size_t offsets[6] = {0, 5, 8, 11, 14, 17};
  for (int i = 0; i < 6; ++i) {
    if (!all_digits(fields[i])) fail(offsets[i], "expected digits");
  }

  std::tm tm{};
  tm.tm_year = to_int(fields[0]) - 1900;
  tm.tm_mon = to_int(fields[1]) - 1;
  tm.tm_mday = to_int(fields[2]);
  tm.tm_hour = to_int(fields[3]);
  tm.tm_min = to_int(fields[4]);
  tm.tm_sec = to_int(fields[5]);

  if (tm.tm_mon < 0 || tm.tm_mon > 11) fail(5, "month out of range");
  if (tm.tm_mday < 1 || tm.tm_mday > 31) fail(8, "day out of range");
  if (tm.tm_hour > 23) fail(11, "hour out of range");
  if (tm.tm_min > 59) fail(14, "minute out of range");
  if (tm.tm_sec > 59) fail(17, "second out of range");

  const std::tm check = tm;
  std::time_t t = timegm(&tm);
  if (t == static_cast<std::time_t>(-1)) fail(0, "unrepresentable time");
  // timegm normalizes; a changed day means the input named a nonexistent
  // date such as 2026-02-30.
  if (tm.tm_mday != check.tm_mday || tm.tm_mon != check.tm_mon) {
    fail(8, "nonexistent calendar date");
  }
  return static_cast<Timestamp>(t);
}

std::string format_rfc3339(Timestamp t) {
  std::time_t tt = static_cast<std::time_t>(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

}  // namespace adi
