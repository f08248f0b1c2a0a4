#pragma once

#include <cstdint>
#include <string>

namespace mff {

/// Shortest decimal form that parses back to the exact same double.
std::string format_double(double value);

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex characters.
std::string fnv1a_file_hex(const std::string& path);

}  // namespace mff
