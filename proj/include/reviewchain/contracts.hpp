#pragma once

// Deterministic contract state machines: review registry with the
// one-review-per-product-version rule, the three authorization modes
// (whitelist, non-transferable access token, shared pool key), vendor
// purchase attestation, and the miner refund pool.
//
// Authorization is keyed on the verified transaction sender; the pool-key
// mode therefore cannot distinguish distinct humans behind the shared
// address, which its tests exercise deliberately.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "reviewchain/bytes.hpp"
#include "reviewchain/identity.hpp"
#include "reviewchain/sha256.hpp"
#include "reviewchain/storage.hpp"

namespace reviewchain {

using Gwei = std::uint64_t;

struct Review {
    std::string product_id;
    std::string product_version;
    std::uint8_t rating = 0;  // 1..5
    Digest32 text_digest{};   // digest of the codec-encoded review text
    Address author;
    Bytes author_public_key;
    Signature author_signature;  // covers product, version, rating, text digest
    StorageRef storage_ref;
    std::uint64_t block_height = 0;
};

// Message the author signs; retrieval re-verifies it without trusting the
// serving node.
inline Bytes review_signing_message(const std::string& product_id,
                                    const std::string& product_version,
                                    std::uint8_t rating,
                                    const Digest32& text_digest) {
    ByteWriter w;
    w.str(product_id);
    w.str(product_version);
    w.u8(rating);
    w.fixed(text_digest);
    return w.take();
}

inline Bytes review_signing_message(const Review& r) {
    return review_signing_message(r.product_id, r.product_version, r.rating,
                                  r.text_digest);
}

struct PurchaseReceipt {
    Address buyer;
    std::string product_id;
    std::string product_version;
    Signature vendor_signature;
};

inline Bytes receipt_signing_message(const Address& buyer,
                                     const std::string& product_id,
                                     const std::string& product_version) {
    ByteWriter w;
    w.fixed(buyer.bytes);
    w.str(product_id);
    w.str(product_version);
    return w.take();
}

// ---------------------------------------------------------------------------
// Authorization modes
// ---------------------------------------------------------------------------

struct WhitelistMode {
    std::set<Address> addresses;
    bool open_registration = true;
};

struct AccessTokenMode {
    // (buyer, product, version) -> token count, only ever 0 or 1.
    std::map<std::tuple<Address, std::string, std::string>, std::uint8_t>
        balances;
};

struct PoolKeyMode {
    Address shared_address;
};

using AuthorizationMode =
    std::variant<WhitelistMode, AccessTokenMode, PoolKeyMode>;

enum class AuthKind : std::uint8_t { whitelist, access_token, pool_key };

inline AuthKind auth_kind(const AuthorizationMode& m) {
    return static_cast<AuthKind>(m.index());
}

inline std::string auth_kind_name(AuthKind k) {
    switch (k) {
        case AuthKind::whitelist: return "whitelist";
        case AuthKind::access_token: return "access_token";
        case AuthKind::pool_key: return "pool_key";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Refund pool
// ---------------------------------------------------------------------------

struct RefundPool {
    Gwei balance = 0;
    std::map<Address, Gwei> vendor_deposits;
    std::map<Address, Gwei> refunds_paid;
    // (block digest, tx index) pairs already refunded.
    std::set<std::pair<Digest32, std::uint32_t>> claimed;

    Gwei total_deposits() const {
        Gwei sum = 0;
        for (const auto& [_, v] : vendor_deposits) sum += v;
        return sum;
    }

    Gwei total_refunds() const {
        Gwei sum = 0;
        for (const auto& [_, v] : refunds_paid) sum += v;
        return sum;
    }
};

// ---------------------------------------------------------------------------
// Contract state
// ---------------------------------------------------------------------------

struct ExecResult {
    bool ok = true;
    std::string reason;

    bool rejected() const { return !ok; }

    static ExecResult accepted() { return {}; }
    static ExecResult rejected(std::string why) {
        return {false, std::move(why)};
    }
};

struct ContractState {
    std::map<std::string, Bytes> vendor_keys;  // product id -> public key
    AuthorizationMode mode = WhitelistMode{};
    // (author, product, version) -> index into `reviews`.
    std::map<std::tuple<Address, std::string, std::string>, std::size_t>
        registry;
    std::vector<Review> reviews;  // immutable once registered
    RefundPool pool;

    void serialize(ByteWriter& w) const;
};

inline void serialize_ref(ByteWriter& w, const StorageRef& ref) {
    w.u8(static_cast<std::uint8_t>(kind_of(ref)));
    if (const auto* oc = std::get_if<OnChainRef>(&ref)) {
        w.bytes(oc->bytes);
    } else if (const auto* an = std::get_if<AnchoredRef>(&ref)) {
        w.fixed(an->digest);
        w.str(an->locator);
    } else {
        w.fixed(std::get<ContentAddressedRef>(ref).content_id);
    }
}

inline StorageRef deserialize_ref(ByteReader& r) {
    auto kind = static_cast<StorageKind>(r.u8());
    switch (kind) {
        case StorageKind::on_chain: return OnChainRef{r.bytes()};
        case StorageKind::anchored: {
            AnchoredRef ref;
            ref.digest = r.fixed<32>();
            ref.locator = r.str();
            return ref;
        }
        case StorageKind::content_addressed:
            return ContentAddressedRef{r.fixed<32>()};
    }
    throw std::invalid_argument("unknown storage ref kind");
}

inline void serialize_review(ByteWriter& w, const Review& rv) {
    w.str(rv.product_id);
    w.str(rv.product_version);
    w.u8(rv.rating);
    w.fixed(rv.text_digest);
    w.fixed(rv.author.bytes);
    w.bytes(rv.author_public_key);
    w.bytes(rv.author_signature);
    serialize_ref(w, rv.storage_ref);
    w.u64(rv.block_height);
}

inline Review deserialize_review(ByteReader& r) {
    Review rv;
    rv.product_id = r.str();
    rv.product_version = r.str();
    rv.rating = r.u8();
    rv.text_digest = r.fixed<32>();
    rv.author.bytes = r.fixed<20>();
    rv.author_public_key = r.bytes();
    rv.author_signature = r.bytes();
    rv.storage_ref = deserialize_ref(r);
    rv.block_height = r.u64();
    return rv;
}

inline void ContractState::serialize(ByteWriter& w) const {
    w.u32(static_cast<std::uint32_t>(vendor_keys.size()));
    for (const auto& [pid, key] : vendor_keys) {
        w.str(pid);
        w.bytes(key);
    }
    w.u8(static_cast<std::uint8_t>(auth_kind(mode)));
    if (const auto* wl = std::get_if<WhitelistMode>(&mode)) {
        w.u8(wl->open_registration ? 1 : 0);
        w.u32(static_cast<std::uint32_t>(wl->addresses.size()));
        for (const auto& a : wl->addresses) w.fixed(a.bytes);
    } else if (const auto* tok = std::get_if<AccessTokenMode>(&mode)) {
        w.u32(static_cast<std::uint32_t>(tok->balances.size()));
        for (const auto& [k, count] : tok->balances) {
            w.fixed(std::get<0>(k).bytes);
            w.str(std::get<1>(k));
            w.str(std::get<2>(k));
            w.u8(count);
        }
    } else {
        w.fixed(std::get<PoolKeyMode>(mode).shared_address.bytes);
    }
    w.u32(static_cast<std::uint32_t>(reviews.size()));
    for (const auto& rv : reviews) serialize_review(w, rv);
    w.u64(pool.balance);
    w.u32(static_cast<std::uint32_t>(pool.vendor_deposits.size()));
    for (const auto& [a, v] : pool.vendor_deposits) {
        w.fixed(a.bytes);
        w.u64(v);
    }
    w.u32(static_cast<std::uint32_t>(pool.refunds_paid.size()));
    for (const auto& [a, v] : pool.refunds_paid) {
        w.fixed(a.bytes);
        w.u64(v);
    }
    w.u32(static_cast<std::uint32_t>(pool.claimed.size()));
    for (const auto& [digest, idx] : pool.claimed) {
        w.fixed(digest);
        w.u32(idx);
    }
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline void register_vendor(ContractState& state, const std::string& product_id,
                            const Bytes& vendor_public_key) {
    if (product_id.empty())
        throw std::invalid_argument("register_vendor: empty product id");
    auto [it, inserted] = state.vendor_keys.emplace(product_id, vendor_public_key);
    if (!inserted)
        throw std::invalid_argument("register_vendor: duplicate registration for " +
                                    product_id);
}

inline const Bytes& vendor_key(const ContractState& state,
                               const std::string& product_id) {
    auto it = state.vendor_keys.find(product_id);
    if (it == state.vendor_keys.end())
        throw std::out_of_range("vendor_key: unknown product " + product_id);
    return it->second;
}

// Deployment-time configuration: pick the authorization design. Locked
// once any review is registered.
inline ExecResult set_authorization_mode(ContractState& state,
                                         AuthorizationMode mode) {
    if (!state.reviews.empty())
        return ExecResult::rejected(
            "set_authorization_mode: contract already has reviews");
    state.mode = std::move(mode);
    return ExecResult::accepted();
}

inline ExecResult whitelist_register(ContractState& state,
                                     const Address& address) {
    auto* wl = std::get_if<WhitelistMode>(&state.mode);
    if (!wl)
        return ExecResult::rejected("whitelist_register: wrong authorization mode");
    if (!wl->open_registration)
        return ExecResult::rejected("whitelist_register: registration closed");
    wl->addresses.insert(address);
    return ExecResult::accepted();
}

inline bool receipt_valid(const ContractState& state,
                          const PurchaseReceipt& receipt) {
    auto it = state.vendor_keys.find(receipt.product_id);
    if (it == state.vendor_keys.end()) return false;
    Bytes msg = receipt_signing_message(receipt.buyer, receipt.product_id,
                                        receipt.product_version);
    return verify(msg, receipt.vendor_signature, it->second);
}

inline ExecResult issue_token(ContractState& state, const Address& buyer,
                              const std::string& product_id,
                              const std::string& product_version,
                              const PurchaseReceipt& receipt) {
    auto* tok = std::get_if<AccessTokenMode>(&state.mode);
    if (!tok)
        return ExecResult::rejected("issue_token: wrong authorization mode");
    if (receipt.buyer != buyer || receipt.product_id != product_id ||
        receipt.product_version != product_version)
        return ExecResult::rejected("issue_token: receipt does not match request");
    if (!receipt_valid(state, receipt))
        return ExecResult::rejected("issue_token: invalid purchase receipt");
    auto key = std::make_tuple(buyer, product_id, product_version);
    auto it = tok->balances.find(key);
    if (it != tok->balances.end())
        return ExecResult::rejected("issue_token: token already issued");
    tok->balances[key] = 1;
    return ExecResult::accepted();
}

// Tokens are untradeable; every transfer attempt fails and leaves state
// untouched.
inline ExecResult token_transfer(ContractState&, const Address&,
                                 const Address&, const std::string&) {
    return ExecResult::rejected("transfer_forbidden: tokens are untradeable");
}

inline bool has_reviewed(const ContractState& state, const Address& author,
                         const std::string& product_id,
                         const std::string& product_version) {
    return state.registry.count(
               std::make_tuple(author, product_id, product_version)) > 0;
}

inline ExecResult submit_review(ContractState& state, const Address& caller,
                                Review review, std::uint64_t block_height) {
    if (review.rating < 1 || review.rating > 5)
        return ExecResult::rejected("malformed review: rating out of range");
    if (review.product_id.empty())
        return ExecResult::rejected("malformed review: empty product id");
    if (review.author != caller)
        return ExecResult::rejected("malformed review: author is not the sender");
    if (derive_address(review.author_public_key) != review.author)
        return ExecResult::rejected(
            "malformed review: public key does not match author address");
    if (!verify(review_signing_message(review), review.author_signature,
                review.author_public_key))
        return ExecResult::rejected("malformed review: bad author signature");

    // msg.sender-based authorization.
    bool consume_token = false;
    if (const auto* wl = std::get_if<WhitelistMode>(&state.mode)) {
        if (!wl->addresses.count(caller))
            return ExecResult::rejected("unauthorized: sender not whitelisted");
    } else if (auto* tok = std::get_if<AccessTokenMode>(&state.mode)) {
        auto key = std::make_tuple(caller, review.product_id,
                                   review.product_version);
        auto it = tok->balances.find(key);
        if (it == tok->balances.end() || it->second == 0)
            return ExecResult::rejected("unauthorized: sender holds no token");
        consume_token = true;
    } else {
        const auto& pk = std::get<PoolKeyMode>(state.mode);
        if (caller != pk.shared_address)
            return ExecResult::rejected("unauthorized: sender is not the pool key");
    }

    // Duplicate detection keyed on (msg.sender, product, version): under
    // pool-key mode all humans share one sender, so a second human's
    // legitimate review is lost as a duplicate.
    auto dup_key = std::make_tuple(caller, review.product_id,
                                   review.product_version);
    if (state.registry.count(dup_key))
        return ExecResult::rejected("duplicate review for this product version");

    if (consume_token)
        std::get<AccessTokenMode>(state.mode).balances[dup_key] = 0;

    review.block_height = block_height;
    state.registry[dup_key] = state.reviews.size();
    state.reviews.push_back(std::move(review));
    return ExecResult::accepted();
}

inline ExecResult deposit_pool(ContractState& state, const Address& vendor,
                               Gwei amount) {
    if (amount == 0)
        return ExecResult::rejected("deposit_pool: amount must be positive");
    state.pool.balance += amount;
    state.pool.vendor_deposits[vendor] += amount;
    return ExecResult::accepted();
}

// Pool-side half of a refund claim. The ledger validates the referenced
// transaction (zero price, right miner, recipient) before calling this.
inline ExecResult pool_pay_refund(ContractState& state, const Address& miner,
                                  const Digest32& block_digest,
                                  std::uint32_t tx_index, Gwei amount) {
    auto claim_key = std::make_pair(block_digest, tx_index);
    if (state.pool.claimed.count(claim_key))
        return ExecResult::rejected("claim_refund: already claimed");
    if (state.pool.balance < amount)
        return ExecResult::rejected("claim_refund: pool balance insufficient");
    state.pool.balance -= amount;
    state.pool.refunds_paid[miner] += amount;
    state.pool.claimed.insert(claim_key);
    return ExecResult::accepted();
}

}  // namespace reviewchain
