#pragma once

// Key generation, address derivation, Ed25519 signing, and the encrypted
// keystore with two KDF work-factor presets (light and standard).
//
// Addresses are the trailing 20 bytes of SHA-256 over the raw public key.
// The keystore encrypts the 32-byte private seed with AES-256-CTR under a
// PBKDF2-derived key and authenticates the ciphertext with HMAC-SHA256;
// encryption key, CTR IV, and MAC key are all stretched from the
// passphrase and a random salt.

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "reviewchain/bytes.hpp"
#include "reviewchain/sha256.hpp"

namespace reviewchain {

using Seed32 = std::array<std::uint8_t, 32>;

struct Address {
    std::array<std::uint8_t, 20> bytes{};

    auto operator<=>(const Address&) const = default;

    std::string hex() const { return hex_encode(bytes.data(), bytes.size()); }

    static Address from_hex(std::string_view h) {
        Bytes raw = hex_decode(h);
        if (raw.size() != 20)
            throw std::invalid_argument("address hex must decode to 20 bytes");
        Address a;
        std::copy(raw.begin(), raw.end(), a.bytes.begin());
        return a;
    }
};

struct KeyPair {
    Seed32 private_key{};
    Bytes public_key;  // 32-byte Ed25519 public key

    bool operator==(const KeyPair&) const = default;
};

using Signature = Bytes;  // 64-byte Ed25519 signature

namespace detail {

struct PkeyDeleter {
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
};
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyDeleter>;

struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxDeleter>;

inline PkeyPtr load_private(const Seed32& seed) {
    PkeyPtr key(EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr,
                                             seed.data(), seed.size()));
    if (!key) throw std::runtime_error("ed25519: key load failed");
    return key;
}

inline PkeyPtr load_public(const Bytes& pub) {
    if (pub.size() != 32)
        throw std::invalid_argument("ed25519: public key must be 32 bytes");
    PkeyPtr key(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr,
                                            pub.data(), pub.size()));
    if (!key) throw std::runtime_error("ed25519: public key load failed");
    return key;
}

}  // namespace detail

inline KeyPair generate_keypair(const Seed32& seed) {
    KeyPair kp;
    kp.private_key = seed;
    auto key = detail::load_private(seed);
    std::size_t len = 32;
    kp.public_key.resize(len);
    if (EVP_PKEY_get_raw_public_key(key.get(), kp.public_key.data(), &len) != 1 ||
        len != 32)
        throw std::runtime_error("ed25519: public key derivation failed");
    return kp;
}

inline KeyPair generate_keypair(const Bytes& seed) {
    if (seed.size() != 32)
        throw std::invalid_argument("seed must be exactly 32 bytes");
    Seed32 s{};
    std::copy(seed.begin(), seed.end(), s.begin());
    return generate_keypair(s);
}

inline Address derive_address(const Bytes& public_key) {
    if (public_key.size() != 32)
        throw std::invalid_argument("malformed public key");
    Digest32 d = sha256(public_key);
    Address a;
    std::copy(d.begin() + 12, d.end(), a.bytes.begin());
    return a;
}

inline Address address_of(const KeyPair& kp) {
    return derive_address(kp.public_key);
}

inline Signature sign(const Bytes& message, const KeyPair& key) {
    auto pkey = detail::load_private(key.private_key);
    detail::MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr,
                                   pkey.get()) != 1)
        throw std::runtime_error("ed25519: sign init failed");
    std::size_t sig_len = 64;
    Signature sig(sig_len);
    if (EVP_DigestSign(ctx.get(), sig.data(), &sig_len, message.data(),
                       message.size()) != 1)
        throw std::runtime_error("ed25519: sign failed");
    sig.resize(sig_len);
    return sig;
}

// Malformed signatures or keys verify false, never throw.
inline bool verify(const Bytes& message, const Signature& signature,
                   const Bytes& public_key) {
    if (signature.size() != 64 || public_key.size() != 32) return false;
    try {
        auto pkey = detail::load_public(public_key);
        detail::MdCtxPtr ctx(EVP_MD_CTX_new());
        if (!ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr,
                                         pkey.get()) != 1)
            return false;
        return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(),
                                message.data(), message.size()) == 1;
    } catch (const std::exception&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// Keystore
// ---------------------------------------------------------------------------

enum class KdfPreset : std::uint8_t { light, standard };

inline std::uint32_t kdf_iterations(KdfPreset p) {
    switch (p) {
        case KdfPreset::light: return 1u << 12;
        case KdfPreset::standard: return 1u << 18;
    }
    throw std::invalid_argument("unknown kdf preset");
}

inline std::string kdf_preset_name(KdfPreset p) {
    return p == KdfPreset::light ? "light" : "standard";
}

inline KdfPreset kdf_preset_from_name(std::string_view name) {
    if (name == "light") return KdfPreset::light;
    if (name == "standard") return KdfPreset::standard;
    throw std::invalid_argument("unknown kdf preset: " + std::string(name));
}

struct Keystore {
    std::uint32_t version = 1;
    KdfPreset kdf_preset = KdfPreset::standard;
    Bytes kdf_salt;
    Bytes ciphertext;
    Bytes mac;
};

namespace detail {

// PBKDF2-HMAC-SHA256 -> 80 bytes: enc key (32) | CTR IV (16) | MAC key (32).
struct KeystoreKeys {
    std::array<std::uint8_t, 32> enc_key{};
    std::array<std::uint8_t, 16> iv{};
    std::array<std::uint8_t, 32> mac_key{};
};

inline KeystoreKeys stretch(const std::string& passphrase, const Bytes& salt,
                            KdfPreset preset) {
    std::array<std::uint8_t, 80> out{};
    if (PKCS5_PBKDF2_HMAC(passphrase.data(),
                          static_cast<int>(passphrase.size()), salt.data(),
                          static_cast<int>(salt.size()),
                          static_cast<int>(kdf_iterations(preset)),
                          EVP_sha256(), static_cast<int>(out.size()),
                          out.data()) != 1)
        throw std::runtime_error("keystore: kdf failed");
    KeystoreKeys k;
    std::copy(out.begin(), out.begin() + 32, k.enc_key.begin());
    std::copy(out.begin() + 32, out.begin() + 48, k.iv.begin());
    std::copy(out.begin() + 48, out.end(), k.mac_key.begin());
    return k;
}

inline Bytes aes256ctr(const Bytes& input,
                       const std::array<std::uint8_t, 32>& key,
                       const std::array<std::uint8_t, 16>& iv) {
    std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(
        EVP_CIPHER_CTX_new(), EVP_CIPHER_CTX_free);
    if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_ctr(), nullptr,
                                   key.data(), iv.data()) != 1)
        throw std::runtime_error("keystore: cipher init failed");
    Bytes out(input.size() + 16);
    int len = 0, total = 0;
    if (EVP_EncryptUpdate(ctx.get(), out.data(), &len, input.data(),
                          static_cast<int>(input.size())) != 1)
        throw std::runtime_error("keystore: cipher update failed");
    total = len;
    if (EVP_EncryptFinal_ex(ctx.get(), out.data() + total, &len) != 1)
        throw std::runtime_error("keystore: cipher final failed");
    total += len;
    out.resize(static_cast<std::size_t>(total));
    return out;
}

inline Bytes hmac_sha256(const std::array<std::uint8_t, 32>& key,
                         const Bytes& data) {
    Bytes out(32);
    unsigned int len = 0;
    if (!HMAC(EVP_sha256(), key.data(), key.size(), data.data(), data.size(),
              out.data(), &len) ||
        len != 32)
        throw std::runtime_error("keystore: hmac failed");
    return out;
}

inline bool const_time_eq(const Bytes& a, const Bytes& b) {
    if (a.size() != b.size()) return false;
    std::uint8_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff |= a[i] ^ b[i];
    return diff == 0;
}

}  // namespace detail

inline Keystore keystore_encrypt(const KeyPair& key,
                                 const std::string& passphrase,
                                 KdfPreset preset, const Bytes& salt) {
    if (passphrase.empty())
        throw std::invalid_argument("keystore: empty passphrase");
    if (salt.size() < 16)
        throw std::invalid_argument("keystore: salt must be >= 16 bytes");
    auto keys = detail::stretch(passphrase, salt, preset);
    Bytes secret(key.private_key.begin(), key.private_key.end());
    Keystore ks;
    ks.kdf_preset = preset;
    ks.kdf_salt = salt;
    ks.ciphertext = detail::aes256ctr(secret, keys.enc_key, keys.iv);
    ks.mac = detail::hmac_sha256(keys.mac_key, ks.ciphertext);
    return ks;
}

inline KeyPair keystore_decrypt(const Keystore& store,
                                const std::string& passphrase) {
    auto keys = detail::stretch(passphrase, store.kdf_salt, store.kdf_preset);
    Bytes expected = detail::hmac_sha256(keys.mac_key, store.ciphertext);
    if (!detail::const_time_eq(expected, store.mac))
        throw std::runtime_error(
            "keystore: authentication failed (wrong passphrase or corrupted "
            "store)");
    Bytes secret = detail::aes256ctr(store.ciphertext, keys.enc_key, keys.iv);
    if (secret.size() != 32)
        throw std::runtime_error("keystore: malformed plaintext");
    Seed32 seed{};
    std::copy(secret.begin(), secret.end(), seed.begin());
    return generate_keypair(seed);
}

// File format: JSON with fields {version, kdf_preset, salt_hex,
// ciphertext_hex, mac_hex}; hex lowercase, no whitespace inside values.
inline std::string keystore_to_text(const Keystore& ks) {
    nlohmann::json j;
    j["version"] = ks.version;
    j["kdf_preset"] = kdf_preset_name(ks.kdf_preset);
    j["salt_hex"] = hex_encode(ks.kdf_salt);
    j["ciphertext_hex"] = hex_encode(ks.ciphertext);
    j["mac_hex"] = hex_encode(ks.mac);
    return j.dump(2);
}

inline Keystore keystore_from_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Keystore ks;
    ks.version = j.at("version").get<std::uint32_t>();
    ks.kdf_preset = kdf_preset_from_name(j.at("kdf_preset").get<std::string>());
    ks.kdf_salt = hex_decode(j.at("salt_hex").get<std::string>());
    ks.ciphertext = hex_decode(j.at("ciphertext_hex").get<std::string>());
    ks.mac = hex_decode(j.at("mac_hex").get<std::string>());
    return ks;
}

}  // namespace reviewchain
