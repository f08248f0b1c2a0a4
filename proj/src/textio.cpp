#include "mff/textio.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include "mff/errors.hpp"

namespace mff {

std::string format_double(double value) {
    std::array<char, 40> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), result.ptr);
}

std::string fnv1a_file_hex(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error("MissingFile", "cannot open file for hashing: " + path);

    std::uint64_t hash = 1469598103934665603ULL;
    constexpr std::uint64_t prime = 1099511628211ULL;
    char chunk[4096];
    while (file.read(chunk, sizeof(chunk)) || file.gcount() > 0) {
        for (std::streamsize i = 0; i < file.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= prime;
        }
    }

    std::string hex(16, '0');
    static const char digits[] = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        hex[static_cast<std::size_t>(i)] = digits[hash & 0xF];
        hash >>= 4;
    }
    return hex;
}

}  // namespace mff
