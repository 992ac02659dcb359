#pragma once

#include <openssl/evp.h>

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lapps {

/// SHA-512 digest of `data` as 128 lowercase hex characters.
inline std::string sha512_hex(std::string_view data) {
    std::array<unsigned char, 64> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha512(), nullptr) != 1 ||
        len != digest.size()) {
        throw std::runtime_error("sha512_hex: digest computation failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(2 * digest.size(), '0');
    for (std::size_t i = 0; i < digest.size(); ++i) {
        out[2 * i] = kHex[digest[i] >> 4];
        out[2 * i + 1] = kHex[digest[i] & 0x0f];
    }
    return out;
}

/// True when `s` has the exact shape of a stored digest: 128 chars of [0-9a-f].
inline bool is_sha512_hex(std::string_view s) {
    if (s.size() != 128) return false;
    for (char c : s) {
        const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
        if (!ok) return false;
    }
    return true;
}

}  // namespace lapps
