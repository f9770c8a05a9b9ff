#pragma once

#include <string>
#include <string_view>

namespace adi {

// Lowercase hex SHA-256 digest (64 chars).
std::string sha256_hex(std::string_view data);

}  // namespace adi
