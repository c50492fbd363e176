#pragma once

// SHA-256 digests over OpenSSL. One digest function is used everywhere:
// addresses, content ids, payload anchors, and state roots.

#include <openssl/evp.h>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "reviewchain/bytes.hpp"

namespace reviewchain {

using Digest32 = std::array<std::uint8_t, 32>;

inline Digest32 sha256(const std::uint8_t* data, std::size_t len) {
    Digest32 out{};
    unsigned int out_len = 0;
    if (EVP_Digest(data, len, out.data(), &out_len, EVP_sha256(), nullptr) != 1 ||
        out_len != out.size())
        throw std::runtime_error("sha256: digest failed");
    return out;
}

inline Digest32 sha256(const Bytes& data) {
    return sha256(data.data(), data.size());
}

inline Digest32 sha256(std::string_view s) {
    return sha256(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

inline std::string digest_hex(const Digest32& d) {
    return hex_encode(d.data(), d.size());
}

inline Digest32 digest_from_hex(std::string_view hex) {
    Bytes raw = hex_decode(hex);
    if (raw.size() != 32)
        throw std::invalid_argument("digest hex must decode to 32 bytes");
    Digest32 d{};
    std::copy(raw.begin(), raw.end(), d.begin());
    return d;
}

}  // namespace reviewchain
