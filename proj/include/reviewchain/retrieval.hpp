#pragma once

// The reading side: a verified review reader over a local full replica,
// and a remote-node reader whose answers pass through an optional
// response tamper hook. Every listed review is re-verified against its
// payload digest and author signature, so tampering by a remote node is
// detectable without trusting it.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "reviewchain/contracts.hpp"
#include "reviewchain/ledger.hpp"
#include "reviewchain/storage.hpp"

namespace reviewchain {

enum class VerificationStatus : std::uint8_t { verified, tampered, unavailable };

inline std::string verification_status_name(VerificationStatus s) {
    switch (s) {
        case VerificationStatus::verified: return "verified";
        case VerificationStatus::tampered: return "tampered";
        case VerificationStatus::unavailable: return "unavailable";
    }
    return "?";
}

struct VerifiedReview {
    Review review;
    VerificationStatus status = VerificationStatus::unavailable;
    std::string detail;
};

inline VerifiedReview verify_review(const Review& rv,
                                    const StorageBackend& backend) {
    VerifiedReview out{rv, VerificationStatus::verified, ""};

    // Author signature covers product, version, rating, and text digest.
    if (derive_address(rv.author_public_key) != rv.author ||
        !verify(review_signing_message(rv), rv.author_signature,
                rv.author_public_key)) {
        out.status = VerificationStatus::tampered;
        out.detail = "author signature mismatch";
        return out;
    }

    // Re-fetch the payload and compare digests.
    try {
        Bytes payload = backend.fetch_payload(rv.storage_ref);
        Digest32 actual = sha256(backend.codec().encode(payload));
        if (actual != rv.text_digest) {
            out.status = VerificationStatus::tampered;
            out.detail = "payload digest mismatch";
        }
    } catch (const TamperDetectedError& e) {
        out.status = VerificationStatus::tampered;
        out.detail = e.what();
    } catch (const NotFoundError& e) {
        out.status = VerificationStatus::unavailable;
        out.detail = e.what();
    } catch (const std::exception& e) {
        out.status = VerificationStatus::unavailable;
        out.detail = e.what();
    }
    return out;
}

// Review content fields a remote node could rewrite without any
// signature or digest noticing. The author signature covers product id,
// version, rating, and text digest; the text digest covers the stored
// bytes reachable through the storage ref; the author address is bound to
// the signing key. That leaves no unsigned content field, so the residue
// is empty — block_height is chain metadata assigned at inclusion, not
// review content.
inline std::vector<std::string> unsigned_residue_fields() { return {}; }

struct SyncStats {
    std::uint64_t blocks = 0;
    std::uint64_t bytes = 0;  // dump size: the space/time cost of a replica
};

// Reader over a locally replayed full replica. Answers are recomputed
// from genesis replay of the chain dump.
class LocalReplicaReader {
public:
    LocalReplicaReader(const StorageBackend& backend, LedgerConfig cfg = {})
        : backend_(&backend), ledger_(cfg) {}

    SyncStats sync(const std::string& chain_dump) {
        ledger_ = Ledger::load_chain(chain_dump, ledger_.config());
        last_sync_.blocks = ledger_.chain().size();
        last_sync_.bytes = chain_dump.size();
        return last_sync_;
    }

    Digest32 state_root_digest() const { return state_root(ledger_.state()); }
    const SyncStats& last_sync() const { return last_sync_; }

    std::vector<VerifiedReview> list_reviews(
        const std::string& product_id,
        const std::optional<std::string>& product_version = {}) const {
        std::vector<VerifiedReview> out;
        for (const auto& rv : ledger_.state().review_contract().reviews) {
            if (rv.product_id != product_id) continue;
            if (product_version && rv.product_version != *product_version)
                continue;
            out.push_back(verify_review(rv, *backend_));
        }
        return out;
    }

private:
    const StorageBackend* backend_;
    Ledger ledger_;
    SyncStats last_sync_;
};

// Reader backed by someone else's node. The tamper hook models a node
// rewriting responses; identity by default.
class RemoteNodeReader {
public:
    using TamperHook = std::function<void(Review&)>;

    RemoteNodeReader(const Ledger& node, const StorageBackend& backend)
        : node_(&node), backend_(&backend) {}

    void set_tamper_hook(TamperHook hook) { hook_ = std::move(hook); }

    std::vector<VerifiedReview> list_reviews(
        const std::string& product_id,
        const std::optional<std::string>& product_version = {}) const {
        std::vector<VerifiedReview> out;
        for (const auto& stored : node_->state().review_contract().reviews) {
            if (stored.product_id != product_id) continue;
            if (product_version && stored.product_version != *product_version)
                continue;
            Review rv = stored;
            if (hook_) hook_(rv);
            out.push_back(verify_review(rv, *backend_));
        }
        return out;
    }

private:
    const Ledger* node_;
    const StorageBackend* backend_;
    TamperHook hook_;
};

}  // namespace reviewchain
