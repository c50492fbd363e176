#pragma once

// Account-based ledger: signed transactions, gas accounting, a mempool
// with fee-ordered miner selection, deterministic block production, and
// replayable state. Consensus is replaced by deterministic single-proposer
// block production; replaying the same block sequence from genesis always
// yields the same state roots.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reviewchain/bytes.hpp"
#include "reviewchain/contracts.hpp"
#include "reviewchain/identity.hpp"
#include "reviewchain/sha256.hpp"
#include "reviewchain/storage.hpp"

namespace reviewchain {

struct GasSchedule {
    std::uint64_t storage_gas_per_byte = 625;
    std::uint64_t base_transaction_gas = 21'000;
    static constexpr std::uint64_t gwei_per_eth = 1'000'000'000;
};

// The single review contract lives at a fixed, well-known address.
inline Address review_contract_address() {
    static const Address addr = [] {
        Digest32 d = sha256(std::string_view("reviewchain.review-contract.v1"));
        Address a;
        std::copy(d.begin() + 12, d.end(), a.bytes.begin());
        return a;
    }();
    return addr;
}

// ---------------------------------------------------------------------------
// Transactions
// ---------------------------------------------------------------------------

struct SignedTransaction {
    Address sender;
    Bytes sender_public_key;
    Address recipient;
    std::uint64_t nonce = 0;
    Bytes payload;
    Gwei gas_price = 0;
    std::uint64_t gas_limit = 0;
    Signature signature;

    bool operator==(const SignedTransaction&) const = default;
};

inline Bytes tx_signing_message(const SignedTransaction& tx) {
    ByteWriter w;
    w.fixed(tx.sender.bytes);
    w.bytes(tx.sender_public_key);
    w.fixed(tx.recipient.bytes);
    w.u64(tx.nonce);
    w.bytes(tx.payload);
    w.u64(tx.gas_price);
    w.u64(tx.gas_limit);
    return w.take();
}

inline void serialize_tx(ByteWriter& w, const SignedTransaction& tx) {
    w.fixed(tx.sender.bytes);
    w.bytes(tx.sender_public_key);
    w.fixed(tx.recipient.bytes);
    w.u64(tx.nonce);
    w.bytes(tx.payload);
    w.u64(tx.gas_price);
    w.u64(tx.gas_limit);
    w.bytes(tx.signature);
}

inline Bytes serialize_tx(const SignedTransaction& tx) {
    ByteWriter w;
    serialize_tx(w, tx);
    return w.take();
}

inline SignedTransaction deserialize_tx(ByteReader& r) {
    SignedTransaction tx;
    tx.sender.bytes = r.fixed<20>();
    tx.sender_public_key = r.bytes();
    tx.recipient.bytes = r.fixed<20>();
    tx.nonce = r.u64();
    tx.payload = r.bytes();
    tx.gas_price = r.u64();
    tx.gas_limit = r.u64();
    tx.signature = r.bytes();
    return tx;
}

inline SignedTransaction deserialize_tx(const Bytes& data) {
    ByteReader r(data);
    SignedTransaction tx = deserialize_tx(r);
    if (!r.at_end())
        throw std::invalid_argument("transaction decode: trailing bytes");
    return tx;
}

inline bool tx_signature_valid(const SignedTransaction& tx) {
    if (derive_address(tx.sender_public_key) != tx.sender) return false;
    return verify(tx_signing_message(tx), tx.signature, tx.sender_public_key);
}

// ---------------------------------------------------------------------------
// Contract call payload encoding: method selector byte + length-prefixed
// arguments in canonical serialization.
// ---------------------------------------------------------------------------

enum class Method : std::uint8_t {
    register_vendor = 0x01,
    whitelist_register = 0x02,
    issue_token = 0x03,
    token_transfer = 0x04,
    submit_review = 0x05,
    deposit_pool = 0x06,
    claim_refund = 0x07,
    set_mode = 0x08,
};

namespace call {

inline Bytes register_vendor(const std::string& product_id,
                             const Bytes& vendor_public_key) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(Method::register_vendor));
    w.str(product_id);
    w.bytes(vendor_public_key);
    return w.take();
}

inline Bytes whitelist_register(const Address& address) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(Method::whitelist_register));
    w.fixed(address.bytes);
    return w.take();
}

inline Bytes issue_token(const PurchaseReceipt& receipt) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(Method::issue_token));
    w.fixed(receipt.buyer.bytes);
    w.str(receipt.product_id);
    w.str(receipt.product_version);
    w.bytes(receipt.vendor_signature);
    return w.take();
}

inline Bytes token_transfer(const Address& from, const Address& to,
                            const std::string& product_id) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(Method::token_transfer));
    w.fixed(from.bytes);
    w.fixed(to.bytes);
    w.str(product_id);
    return w.take();
}

inline Bytes submit_review(const Review& review) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(Method::submit_review));
    serialize_review(w, review);
    return w.take();
}

inline Bytes deposit_pool(Gwei amount) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(Method::deposit_pool));
    w.u64(amount);
    return w.take();
}

inline Bytes claim_refund(const Digest32& block_digest, std::uint32_t tx_index) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(Method::claim_refund));
    w.fixed(block_digest);
    w.u32(tx_index);
    return w.take();
}

inline Bytes set_mode(const AuthorizationMode& mode) {
    ByteWriter w;
    w.u8(static_cast<std::uint8_t>(Method::set_mode));
    w.u8(static_cast<std::uint8_t>(auth_kind(mode)));
    if (const auto* wl = std::get_if<WhitelistMode>(&mode))
        w.u8(wl->open_registration ? 1 : 0);
    else if (const auto* pk = std::get_if<PoolKeyMode>(&mode))
        w.fixed(pk->shared_address.bytes);
    return w.take();
}

}  // namespace call

// Bytes a contract call persists on chain; drives storage gas.
inline std::size_t stored_payload_bytes(const Bytes& payload) {
    if (payload.empty()) return 0;
    try {
        ByteReader r(payload);
        if (static_cast<Method>(r.u8()) != Method::submit_review) return 0;
        Review rv = deserialize_review(r);
        return on_chain_footprint(rv.storage_ref);
    } catch (const std::exception&) {
        return 0;
    }
}

inline std::uint64_t gas_used_for(const Bytes& payload,
                                  const GasSchedule& schedule) {
    return schedule.base_transaction_gas +
           schedule.storage_gas_per_byte * stored_payload_bytes(payload);
}

// ---------------------------------------------------------------------------
// Blocks and chain state
// ---------------------------------------------------------------------------

struct Block {
    std::uint64_t height = 0;
    Digest32 parent_digest{};
    Address miner;
    std::vector<SignedTransaction> transactions;
    Digest32 state_root{};
};

inline Bytes serialize_block(const Block& b) {
    ByteWriter w;
    w.u64(b.height);
    w.fixed(b.parent_digest);
    w.fixed(b.miner.bytes);
    w.u32(static_cast<std::uint32_t>(b.transactions.size()));
    for (const auto& tx : b.transactions) serialize_tx(w, tx);
    w.fixed(b.state_root);
    return w.take();
}

inline Digest32 block_digest(const Block& b) {
    return sha256(serialize_block(b));
}

struct ChainState {
    std::map<Address, Gwei> balances;
    std::map<Address, std::uint64_t> nonces;
    std::map<Address, ContractState> contract_states;
    // Per applied block, the gas price of every included transaction
    // (sponsored zero-price ones recorded as 0).
    std::vector<std::vector<Gwei>> fee_history;
    Gwei minted = 0;  // faucet mints, for conservation accounting
    // Every faucet mint with the chain height it happened at, so replicas
    // can replay funding alongside blocks.
    std::vector<std::tuple<std::uint64_t, Address, Gwei>> mint_log;
    Digest32 head_digest{};
    std::uint64_t height = 0;  // number of applied blocks

    ChainState() { contract_states.emplace(review_contract_address(), ContractState{}); }

    ContractState& review_contract() {
        return contract_states.at(review_contract_address());
    }
    const ContractState& review_contract() const {
        return contract_states.at(review_contract_address());
    }

    Gwei balance(const Address& a) const {
        auto it = balances.find(a);
        return it == balances.end() ? 0 : it->second;
    }

    std::uint64_t nonce(const Address& a) const {
        auto it = nonces.find(a);
        return it == nonces.end() ? 0 : it->second;
    }
};

inline Digest32 state_root(const ChainState& s) {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(s.balances.size()));
    for (const auto& [a, v] : s.balances) {
        w.fixed(a.bytes);
        w.u64(v);
    }
    w.u32(static_cast<std::uint32_t>(s.nonces.size()));
    for (const auto& [a, v] : s.nonces) {
        w.fixed(a.bytes);
        w.u64(v);
    }
    w.u32(static_cast<std::uint32_t>(s.contract_states.size()));
    for (const auto& [a, cs] : s.contract_states) {
        w.fixed(a.bytes);
        cs.serialize(w);
    }
    w.u32(static_cast<std::uint32_t>(s.fee_history.size()));
    for (const auto& prices : s.fee_history) {
        w.u32(static_cast<std::uint32_t>(prices.size()));
        for (Gwei p : prices) w.u64(p);
    }
    w.u64(s.minted);
    w.u32(static_cast<std::uint32_t>(s.mint_log.size()));
    for (const auto& [h, a, v] : s.mint_log) {
        w.u64(h);
        w.fixed(a.bytes);
        w.u64(v);
    }
    w.u64(s.height);
    return sha256(w.data());
}

inline void faucet_fund(ChainState& state, const Address& target, Gwei amount) {
    if (amount == 0) throw std::invalid_argument("faucet_fund: amount must be > 0");
    state.balances[target] += amount;
    state.minted += amount;
    state.mint_log.emplace_back(state.height, target, amount);
}

// Median of all nonzero gas prices paid across the last `window` blocks
// (lower median for even counts); 0 when there is no paid-fee history.
inline Gwei median_fee(const ChainState& state, std::uint64_t window) {
    if (window < 1) throw std::invalid_argument("median_fee: window must be >= 1");
    std::vector<Gwei> prices;
    std::size_t first = state.fee_history.size() > window
                            ? state.fee_history.size() - window
                            : 0;
    for (std::size_t i = first; i < state.fee_history.size(); ++i)
        for (Gwei p : state.fee_history[i])
            if (p > 0) prices.push_back(p);
    if (prices.empty()) return 0;
    std::sort(prices.begin(), prices.end());
    return prices[(prices.size() - 1) / 2];
}

// ---------------------------------------------------------------------------
// Transaction application
// ---------------------------------------------------------------------------

struct TxOutcome {
    bool valid = false;           // ledger-level validity (signature/nonce/fee)
    ExecResult exec;              // contract-level outcome
    std::uint64_t gas_used = 0;
    std::string reason;           // set when !valid
};

inline constexpr std::uint64_t kDefaultRefundWindow = 1500;

struct LedgerConfig {
    GasSchedule schedule;
    std::uint64_t refund_window = kDefaultRefundWindow;
};

namespace detail {

// Dispatch a contract call against the review contract. Contract-level
// rejections do not invalidate the enclosing block.
inline ExecResult execute_call(ChainState& state,
                               const std::vector<Block>& chain,
                               const SignedTransaction& tx,
                               std::uint64_t block_height,
                               const LedgerConfig& cfg) {
    ContractState& cs = state.review_contract();
    try {
        ByteReader r(tx.payload);
        switch (static_cast<Method>(r.u8())) {
            case Method::register_vendor: {
                std::string pid = r.str();
                Bytes key = r.bytes();
                try {
                    register_vendor(cs, pid, key);
                    return ExecResult::accepted();
                } catch (const std::exception& e) {
                    return ExecResult::rejected(e.what());
                }
            }
            case Method::whitelist_register: {
                Address a;
                a.bytes = r.fixed<20>();
                return whitelist_register(cs, a);
            }
            case Method::issue_token: {
                PurchaseReceipt receipt;
                receipt.buyer.bytes = r.fixed<20>();
                receipt.product_id = r.str();
                receipt.product_version = r.str();
                receipt.vendor_signature = r.bytes();
                return issue_token(cs, receipt.buyer, receipt.product_id,
                                   receipt.product_version, receipt);
            }
            case Method::token_transfer: {
                Address from, to;
                from.bytes = r.fixed<20>();
                to.bytes = r.fixed<20>();
                std::string pid = r.str();
                return token_transfer(cs, from, to, pid);
            }
            case Method::submit_review: {
                Review rv = deserialize_review(r);
                return submit_review(cs, tx.sender, std::move(rv), block_height);
            }
            case Method::deposit_pool: {
                Gwei amount = r.u64();
                if (state.balance(tx.sender) < amount)
                    return ExecResult::rejected(
                        "deposit_pool: insufficient sender balance");
                ExecResult res = deposit_pool(cs, tx.sender, amount);
                if (res.ok) state.balances[tx.sender] -= amount;
                return res;
            }
            case Method::claim_refund: {
                Digest32 ref_digest = r.fixed<32>();
                std::uint32_t tx_index = r.u32();
                const Block* ref_block = nullptr;
                for (const auto& b : chain)
                    if (block_digest(b) == ref_digest) {
                        ref_block = &b;
                        break;
                    }
                if (!ref_block)
                    return ExecResult::rejected("claim_refund: unknown block");
                if (tx_index >= ref_block->transactions.size())
                    return ExecResult::rejected("claim_refund: tx index out of range");
                const SignedTransaction& ref_tx =
                    ref_block->transactions[tx_index];
                if (ref_tx.recipient != review_contract_address())
                    return ExecResult::rejected(
                        "claim_refund: transaction did not target the review contract");
                if (ref_tx.gas_price != 0)
                    return ExecResult::rejected("claim_refund: nonzero gas price");
                if (ref_block->miner != tx.sender)
                    return ExecResult::rejected(
                        "claim_refund: claimant did not mine the block");
                Gwei median = median_fee(state, cfg.refund_window);
                Gwei amount =
                    median * gas_used_for(ref_tx.payload, cfg.schedule);
                ExecResult res = pool_pay_refund(cs, tx.sender, ref_digest,
                                                 tx_index, amount);
                if (res.ok) state.balances[tx.sender] += amount;
                return res;
            }
            case Method::set_mode: {
                auto kind = static_cast<AuthKind>(r.u8());
                switch (kind) {
                    case AuthKind::whitelist:
                        return set_authorization_mode(
                            cs, WhitelistMode{{}, r.u8() != 0});
                    case AuthKind::access_token:
                        return set_authorization_mode(cs, AccessTokenMode{});
                    case AuthKind::pool_key: {
                        PoolKeyMode pk;
                        pk.shared_address.bytes = r.fixed<20>();
                        return set_authorization_mode(cs, pk);
                    }
                }
                return ExecResult::rejected("set_mode: unknown mode kind");
            }
        }
        return ExecResult::rejected("unknown method selector");
    } catch (const std::exception& e) {
        return ExecResult::rejected(std::string("malformed call payload: ") +
                                    e.what());
    }
}

}  // namespace detail

// Apply one transaction. Ledger-level failure (bad signature, nonce gap,
// unpayable fee) marks the transaction invalid; inside apply_block that
// aborts the whole block.
inline TxOutcome apply_transaction(ChainState& state,
                                   const std::vector<Block>& chain,
                                   const SignedTransaction& tx,
                                   const Address& miner,
                                   std::uint64_t block_height,
                                   const LedgerConfig& cfg) {
    TxOutcome out;
    if (!tx_signature_valid(tx)) {
        out.reason = "bad signature";
        return out;
    }
    if (tx.nonce != state.nonce(tx.sender)) {
        out.reason = tx.nonce < state.nonce(tx.sender) ? "stale nonce"
                                                       : "nonce gap";
        return out;
    }
    std::uint64_t gas_used = gas_used_for(tx.payload, cfg.schedule);
    if (gas_used > tx.gas_limit) {
        out.reason = "gas limit exceeded";
        return out;
    }
    Gwei fee = gas_used * tx.gas_price;
    if (state.balance(tx.sender) < fee) {
        out.reason = "insufficient funds for fee (sender " + tx.sender.hex() +
                     ", fee " + std::to_string(fee) + ", balance " +
                     std::to_string(state.balance(tx.sender)) + ")";
        return out;
    }

    state.balances[tx.sender] -= fee;
    state.balances[miner] += fee;
    state.nonces[tx.sender] = tx.nonce + 1;

    out.valid = true;
    out.gas_used = gas_used;
    if (tx.recipient == review_contract_address())
        out.exec = detail::execute_call(state, chain, tx, block_height, cfg);
    return out;
}

// ---------------------------------------------------------------------------
// Mempool and miner policy
// ---------------------------------------------------------------------------

struct AdmitResult {
    bool admitted = false;
    std::string reason;
};

struct MinerPolicy {
    Gwei min_gas_price = 1;
    bool accept_zero_for_refund_contract = false;
    std::size_t capacity = 100;
};

class Mempool {
public:
    AdmitResult submit(const ChainState& state, const SignedTransaction& tx) {
        if (!tx_signature_valid(tx)) return {false, "bad signature"};
        if (tx.nonce < state.nonce(tx.sender)) return {false, "stale nonce"};
        Gwei max_fee = tx.gas_limit * tx.gas_price;
        if (state.balance(tx.sender) < max_fee)
            return {false, "insufficient funds"};
        pending_.push_back(tx);
        return {true, ""};
    }

    // Price-descending selection (arrival order breaks ties); zero-price
    // transactions pass only under the refund-contract policy flag.
    std::vector<SignedTransaction> select(const MinerPolicy& policy) const {
        std::vector<SignedTransaction> picked;
        for (const auto& tx : pending_) {
            bool eligible = tx.gas_price >= policy.min_gas_price;
            if (!eligible && tx.gas_price == 0 &&
                policy.accept_zero_for_refund_contract &&
                tx.recipient == review_contract_address())
                eligible = true;
            if (eligible) picked.push_back(tx);
        }
        std::stable_sort(picked.begin(), picked.end(),
                         [](const auto& a, const auto& b) {
                             return a.gas_price > b.gas_price;
                         });
        if (picked.size() > policy.capacity) picked.resize(policy.capacity);
        return picked;
    }

    void remove(const std::vector<SignedTransaction>& included) {
        for (const auto& tx : included) {
            auto it = std::find(pending_.begin(), pending_.end(), tx);
            if (it != pending_.end()) pending_.erase(it);
        }
    }

    // Relay-style censorship: drop every pending transaction from `sender`.
    std::size_t drop_from(const Address& sender) {
        std::size_t before = pending_.size();
        pending_.erase(std::remove_if(pending_.begin(), pending_.end(),
                                      [&](const auto& tx) {
                                          return tx.sender == sender;
                                      }),
                       pending_.end());
        return before - pending_.size();
    }

    std::size_t size() const { return pending_.size(); }
    const std::deque<SignedTransaction>& pending() const { return pending_; }

private:
    std::deque<SignedTransaction> pending_;
};

// ---------------------------------------------------------------------------
// Ledger: chain + state + mempool under one deterministic writer
// ---------------------------------------------------------------------------

class Ledger {
public:
    explicit Ledger(LedgerConfig cfg = {}) : cfg_(cfg) {}

    const ChainState& state() const { return state_; }
    ChainState& state() { return state_; }
    const std::vector<Block>& chain() const { return chain_; }
    Mempool& mempool() { return mempool_; }
    const LedgerConfig& config() const { return cfg_; }

    AdmitResult submit(const SignedTransaction& tx) {
        return mempool_.submit(state_, tx);
    }

    // Build a block from policy-selected mempool transactions, dropping any
    // that would not apply cleanly (a miner never includes an invalid tx).
    Block produce_block(const MinerPolicy& policy, const Address& miner) {
        std::vector<SignedTransaction> selected = mempool_.select(policy);
        ChainState scratch = state_;
        std::vector<SignedTransaction> included;
        for (const auto& tx : selected) {
            ChainState before = scratch;
            TxOutcome out = apply_transaction(scratch, chain_, tx, miner,
                                              state_.height + 1, cfg_);
            if (out.valid) {
                included.push_back(tx);
            } else {
                scratch = std::move(before);
            }
        }
        Block b;
        b.height = state_.height + 1;
        b.parent_digest = state_.head_digest;
        b.miner = miner;
        b.transactions = std::move(included);
        std::vector<Gwei> prices;
        for (const auto& tx : b.transactions) prices.push_back(tx.gas_price);
        scratch.fee_history.push_back(std::move(prices));
        scratch.height = state_.height + 1;
        b.state_root = state_root(scratch);
        return b;
    }

    // Strict application: any invalid transaction or root mismatch aborts
    // the block and leaves the ledger untouched.
    std::vector<TxOutcome> apply_block(const Block& block) {
        if (block.parent_digest != state_.head_digest)
            throw std::invalid_argument("apply_block: parent digest mismatch");
        if (block.height != state_.height + 1)
            throw std::invalid_argument("apply_block: bad height");
        ChainState next = state_;
        std::vector<TxOutcome> outcomes;
        for (const auto& tx : block.transactions) {
            TxOutcome out = apply_transaction(next, chain_, tx, block.miner,
                                              block.height, cfg_);
            if (!out.valid)
                throw std::invalid_argument(
                    "apply_block: invalid transaction in block: " + out.reason);
            outcomes.push_back(std::move(out));
        }
        std::vector<Gwei> prices;
        for (const auto& tx : block.transactions) prices.push_back(tx.gas_price);
        next.fee_history.push_back(std::move(prices));
        next.height = block.height;
        if (state_root(next) != block.state_root)
            throw std::invalid_argument("apply_block: state root mismatch");
        next.head_digest = block_digest(block);
        state_ = std::move(next);
        chain_.push_back(block);
        mempool_.remove(block.transactions);
        return outcomes;
    }

    std::vector<TxOutcome> mine(const MinerPolicy& policy, const Address& miner) {
        return apply_block(produce_block(policy, miner));
    }

    void faucet(const Address& target, Gwei amount) {
        faucet_fund(state_, target, amount);
    }

    // Conservation check: every Gwei in circulation (accounts + refund
    // pool) traces back to a faucet mint.
    bool conserves_value() const {
        Gwei sum = 0;
        for (const auto& [_, v] : state_.balances) sum += v;
        for (const auto& [_, cs] : state_.contract_states) sum += cs.pool.balance;
        return sum == state_.minted;
    }

    // -----------------------------------------------------------------
    // Chain dump/load: newline-delimited records, one block per line,
    // hex-encoded digests; round-trips bit-exactly.
    // -----------------------------------------------------------------

    std::string dump_chain() const {
        std::ostringstream out;
        // Faucet mints interleave with blocks at the height they occurred,
        // so a replay reproduces funded balances exactly.
        std::size_t next_mint = 0;
        auto emit_mints_at = [&](std::uint64_t height) {
            while (next_mint < state_.mint_log.size() &&
                   std::get<0>(state_.mint_log[next_mint]) <= height) {
                const auto& [h, addr, amount] = state_.mint_log[next_mint];
                nlohmann::json j;
                j["type"] = "mint";
                j["height"] = h;
                j["address"] = addr.hex();
                j["amount"] = amount;
                out << j.dump() << '\n';
                ++next_mint;
            }
        };
        for (const auto& b : chain_) {
            emit_mints_at(b.height - 1);
            nlohmann::json j;
            j["height"] = b.height;
            j["parent_digest"] = digest_hex(b.parent_digest);
            j["miner"] = b.miner.hex();
            j["state_root"] = digest_hex(b.state_root);
            std::vector<std::string> txs;
            for (const auto& tx : b.transactions)
                txs.push_back(hex_encode(serialize_tx(tx)));
            j["transactions"] = txs;
            out << j.dump() << '\n';
        }
        emit_mints_at(state_.height);
        return out.str();
    }

    static Block parse_block_record(const nlohmann::json& j) {
        Block b;
        b.height = j.at("height").get<std::uint64_t>();
        b.parent_digest = digest_from_hex(j.at("parent_digest").get<std::string>());
        b.miner = Address::from_hex(j.at("miner").get<std::string>());
        b.state_root = digest_from_hex(j.at("state_root").get<std::string>());
        for (const auto& tx_hex : j.at("transactions"))
            b.transactions.push_back(
                deserialize_tx(hex_decode(tx_hex.get<std::string>())));
        return b;
    }

    // Rebuild a ledger by replaying a dump from genesis.
    static Ledger load_chain(const std::string& text, LedgerConfig cfg = {}) {
        Ledger ledger(cfg);
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line);
            if (j.value("type", "block") == "mint") {
                Address target = Address::from_hex(j.at("address").get<std::string>());
                faucet_fund(ledger.state_, target, j.at("amount").get<Gwei>());
            } else {
                ledger.apply_block(parse_block_record(j));
            }
        }
        return ledger;
    }

private:
    LedgerConfig cfg_;
    ChainState state_;
    std::vector<Block> chain_;
    Mempool mempool_;
};

// ---------------------------------------------------------------------------
// Transaction building
// ---------------------------------------------------------------------------

inline SignedTransaction build_transaction(const KeyPair& sender_key,
                                           const Address& recipient,
                                           Bytes payload, Gwei gas_price,
                                           std::uint64_t nonce,
                                           const GasSchedule& schedule = {}) {
    SignedTransaction tx;
    tx.sender = address_of(sender_key);
    tx.sender_public_key = sender_key.public_key;
    tx.recipient = recipient;
    tx.nonce = nonce;
    tx.payload = std::move(payload);
    tx.gas_price = gas_price;
    tx.gas_limit = gas_used_for(tx.payload, schedule);
    tx.signature = sign(tx_signing_message(tx), sender_key);
    return tx;
}

}  // namespace reviewchain
