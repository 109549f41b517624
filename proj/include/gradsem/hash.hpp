#ifndef GRADSEM_HASH_HPP
#define GRADSEM_HASH_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace gradsem {

// 64-bit FNV-1a. Used as a stable content fingerprint (prompt hashes,
// asset hashes, fixture keys), not for anything adversarial.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string to_hex(std::uint64_t v) {
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

inline std::string fnv1a64_hex(std::string_view data) { return to_hex(fnv1a64(data)); }

}  // namespace gradsem

#endif  // GRADSEM_HASH_HPP
