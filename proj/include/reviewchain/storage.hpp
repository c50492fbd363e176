#pragma once

// Review payload storage behind one interface, in three designs:
//
//   OnChain          — payload bytes live inside the transaction itself;
//                      the ledger charges storage gas on them.
//   Anchored         — payload lives in a centralized store, only its
//                      digest is anchored; the operator can mutate stored
//                      bytes, which fetch must detect.
//   ContentAddressed — payload lives in a CAS keyed by its digest; bytes
//                      under an existing content id are immutable.
//
// Payloads pass through a pluggable codec before storage; the anchor
// digest and content id are computed over the encoded bytes.

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "reviewchain/bytes.hpp"
#include "reviewchain/sha256.hpp"

namespace reviewchain {

constexpr std::size_t kMaxReviewTextBytes = 8 * 1024;

struct OnChainRef {
    Bytes bytes;
    bool operator==(const OnChainRef&) const = default;
};

struct AnchoredRef {
    Digest32 digest{};
    std::string locator;
    bool operator==(const AnchoredRef&) const = default;
};

struct ContentAddressedRef {
    Digest32 content_id{};
    bool operator==(const ContentAddressedRef&) const = default;
};

using StorageRef = std::variant<OnChainRef, AnchoredRef, ContentAddressedRef>;

enum class StorageKind : std::uint8_t { on_chain, anchored, content_addressed };

inline StorageKind kind_of(const StorageRef& ref) {
    return static_cast<StorageKind>(ref.index());
}

// Bytes the ledger persists for a given ref: the inline payload for
// OnChain, the digest (plus locator) otherwise.
inline std::size_t on_chain_footprint(const StorageRef& ref) {
    if (const auto* oc = std::get_if<OnChainRef>(&ref)) return oc->bytes.size();
    if (const auto* an = std::get_if<AnchoredRef>(&ref))
        return an->digest.size() + an->locator.size();
    return std::get<ContentAddressedRef>(ref).content_id.size();
}

struct PayloadCodec {
    std::string id = "identity";
    std::function<Bytes(const Bytes&)> encode = [](const Bytes& b) { return b; };
    std::function<Bytes(const Bytes&)> decode = [](const Bytes& b) { return b; };
};

class TamperDetectedError : public std::runtime_error {
public:
    TamperDetectedError(const Digest32& expected, const Digest32& actual)
        : std::runtime_error("tamper detected: expected digest " +
                             digest_hex(expected) + ", got " +
                             digest_hex(actual)),
          expected_digest(expected),
          actual_digest(actual) {}

    Digest32 expected_digest;
    Digest32 actual_digest;
};

class NotFoundError : public std::runtime_error {
public:
    explicit NotFoundError(const std::string& what)
        : std::runtime_error("not found: " + what) {}
};

// ---------------------------------------------------------------------------
// Content-addressed store. In memory by default; with a directory it also
// writes one file per content id (hex filename, raw bytes).
// ---------------------------------------------------------------------------
class CasStore {
public:
    CasStore() = default;

    explicit CasStore(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(*dir_);
        for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
            if (!entry.is_regular_file()) continue;
            std::ifstream in(entry.path(), std::ios::binary);
            Bytes data((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
            blobs_[digest_from_hex(entry.path().filename().string())] =
                std::move(data);
        }
    }

    // Idempotent: a second put of the same content is a no-op.
    Digest32 put(const Bytes& encoded) {
        std::lock_guard lock(mu_);
        Digest32 id = sha256(encoded);
        auto [it, inserted] = blobs_.emplace(id, encoded);
        if (inserted && dir_) {
            std::ofstream out(*dir_ / digest_hex(id), std::ios::binary);
            out.write(reinterpret_cast<const char*>(encoded.data()),
                      static_cast<std::streamsize>(encoded.size()));
        }
        return id;
    }

    Bytes get(const Digest32& content_id) const {
        std::lock_guard lock(mu_);
        auto it = blobs_.find(content_id);
        if (it == blobs_.end())
            throw NotFoundError("content id " + digest_hex(content_id));
        return it->second;
    }

    std::size_t size() const {
        std::lock_guard lock(mu_);
        return blobs_.size();
    }

private:
    mutable std::mutex mu_;
    std::map<Digest32, Bytes> blobs_;
    std::optional<std::filesystem::path> dir_;
};

// ---------------------------------------------------------------------------
// Centralized store: append-log with an index. The operator-side tamper
// hook replaces stored bytes without touching the on-chain anchor.
// ---------------------------------------------------------------------------
class CentralizedStore {
public:
    CentralizedStore() = default;

    explicit CentralizedStore(std::filesystem::path log_path)
        : log_path_(std::move(log_path)) {}

    std::string put(const Bytes& encoded) {
        std::lock_guard lock(mu_);
        std::string locator = "obj-" + std::to_string(next_id_++);
        records_[locator] = encoded;
        append_log(locator, encoded);
        return locator;
    }

    Bytes get(const std::string& locator) const {
        std::lock_guard lock(mu_);
        auto it = records_.find(locator);
        if (it == records_.end()) throw NotFoundError("locator " + locator);
        return it->second;
    }

    // Operator mutation: silently replaces the stored bytes.
    void tamper(const std::string& locator, const Bytes& new_bytes) {
        std::lock_guard lock(mu_);
        auto it = records_.find(locator);
        if (it == records_.end()) throw NotFoundError("locator " + locator);
        it->second = new_bytes;
        append_log(locator, new_bytes);
    }

    void set_unavailable(bool v) { unavailable_ = v; }
    bool unavailable() const { return unavailable_; }

private:
    void append_log(const std::string& locator, const Bytes& data) {
        if (!log_path_) return;
        std::ofstream out(*log_path_, std::ios::binary | std::ios::app);
        out << locator << ' ' << hex_encode(data) << '\n';
    }

    mutable std::mutex mu_;
    std::map<std::string, Bytes> records_;
    std::uint64_t next_id_ = 0;
    bool unavailable_ = false;
    std::optional<std::filesystem::path> log_path_;
};

// ---------------------------------------------------------------------------
// Unified backend over the three designs.
// ---------------------------------------------------------------------------
class StorageBackend {
public:
    explicit StorageBackend(StorageKind kind, PayloadCodec codec = {})
        : kind_(kind), codec_(std::move(codec)) {}

    StorageKind kind() const { return kind_; }
    const PayloadCodec& codec() const { return codec_; }

    StorageRef store_payload(const Bytes& payload) {
        if (payload.empty())
            throw std::invalid_argument("store_payload: empty payload");
        if (payload.size() > kMaxReviewTextBytes)
            throw std::invalid_argument("store_payload: payload exceeds 8 KiB cap");
        Bytes encoded = codec_.encode(payload);
        switch (kind_) {
            case StorageKind::on_chain:
                return OnChainRef{encoded};
            case StorageKind::anchored: {
                if (central_.unavailable())
                    throw std::runtime_error("centralized store unavailable");
                AnchoredRef ref;
                ref.digest = sha256(encoded);
                ref.locator = central_.put(encoded);
                return ref;
            }
            case StorageKind::content_addressed:
                return ContentAddressedRef{cas_.put(encoded)};
        }
        throw std::logic_error("unreachable");
    }

    // Digest mismatch raises TamperDetectedError rather than returning data.
    Bytes fetch_payload(const StorageRef& ref) const {
        if (const auto* oc = std::get_if<OnChainRef>(&ref))
            return codec_.decode(oc->bytes);
        if (const auto* an = std::get_if<AnchoredRef>(&ref)) {
            if (central_.unavailable())
                throw std::runtime_error("centralized store unavailable");
            Bytes encoded = central_.get(an->locator);
            Digest32 actual = sha256(encoded);
            if (actual != an->digest)
                throw TamperDetectedError(an->digest, actual);
            return codec_.decode(encoded);
        }
        const auto& ca = std::get<ContentAddressedRef>(ref);
        Bytes encoded = cas_.get(ca.content_id);
        Digest32 actual = sha256(encoded);
        if (actual != ca.content_id)
            throw TamperDetectedError(ca.content_id, actual);
        return codec_.decode(encoded);
    }

    // Test hook modeling the centralized operator; errors on other backends.
    void tamper_centralized(const std::string& locator, const Bytes& new_bytes) {
        if (kind_ != StorageKind::anchored)
            throw std::logic_error(
                "tamper_centralized: backend is not the centralized store");
        central_.tamper(locator, new_bytes);
    }

    void set_unavailable(bool v) { central_.set_unavailable(v); }

    CasStore& cas() { return cas_; }
    CentralizedStore& centralized() { return central_; }

private:
    StorageKind kind_;
    PayloadCodec codec_;
    CasStore cas_;
    CentralizedStore central_;
};

}  // namespace reviewchain
