#pragma once

// Byte-level utilities: hex codec and the canonical serialization
// primitives used for signing and hashing. Canonical form is fixed
// field order, big-endian fixed-width integers, and length-prefixed
// byte fields, so the same logical value always hashes identically.

#include <array>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reviewchain {

using Bytes = std::vector<std::uint8_t>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(const Bytes& b) {
    return std::string(b.begin(), b.end());
}

inline std::string hex_encode(const std::uint8_t* data, std::size_t len) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0x0f]);
    }
    return out;
}

inline std::string hex_encode(const Bytes& b) {
    return hex_encode(b.data(), b.size());
}

template <std::size_t N>
std::string hex_encode(const std::array<std::uint8_t, N>& a) {
    return hex_encode(a.data(), N);
}

inline int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

inline Bytes hex_decode(std::string_view hex) {
    if (hex.size() % 2 != 0)
        throw std::invalid_argument("hex string has odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("invalid hex character");
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

// Canonical encoder. Append-only; callers write fields in the order the
// type's schema fixes.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }

    void u32(std::uint32_t v) {
        for (int shift = 24; shift >= 0; shift -= 8)
            buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    }

    void u64(std::uint64_t v) {
        for (int shift = 56; shift >= 0; shift -= 8)
            buf_.push_back(static_cast<std::uint8_t>(v >> shift));
    }

    // Length-prefixed (u32) byte field.
    void bytes(const Bytes& b) {
        u32(static_cast<std::uint32_t>(b.size()));
        buf_.insert(buf_.end(), b.begin(), b.end());
    }

    void bytes(const std::uint8_t* data, std::size_t len) {
        u32(static_cast<std::uint32_t>(len));
        buf_.insert(buf_.end(), data, data + len);
    }

    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    // Fixed-width field, no length prefix.
    template <std::size_t N>
    void fixed(const std::array<std::uint8_t, N>& a) {
        buf_.insert(buf_.end(), a.begin(), a.end());
    }

    const Bytes& data() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

// Canonical decoder; throws on truncated input.
class ByteReader {
public:
    explicit ByteReader(const Bytes& data) : data_(data) {}

    std::uint8_t u8() {
        need(1);
        return data_[pos_++];
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
        return v;
    }

    Bytes bytes() {
        std::uint32_t len = u32();
        need(len);
        Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  data_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
        pos_ += len;
        return out;
    }

    std::string str() {
        Bytes b = bytes();
        return std::string(b.begin(), b.end());
    }

    template <std::size_t N>
    std::array<std::uint8_t, N> fixed() {
        need(N);
        std::array<std::uint8_t, N> a{};
        std::memcpy(a.data(), data_.data() + pos_, N);
        pos_ += N;
        return a;
    }

    bool at_end() const { return pos_ == data_.size(); }
    std::size_t remaining() const { return data_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > data_.size())
            throw std::out_of_range("canonical decode: truncated input");
    }

    const Bytes& data_;
    std::size_t pos_ = 0;
};

}  // namespace reviewchain
