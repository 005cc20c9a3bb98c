#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace curvforge {

/// 64-bit FNV-1a over the bytes of `text`, rendered as 16 lowercase hex digits.
/// Used as a stable content tag, not as a cryptographic hash.
inline std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace curvforge
