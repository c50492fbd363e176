#pragma once

// End-to-end scenario runner: wires identity, ledger, contracts, storage,
// economics, and retrieval into one deterministic workload, runs the
// attack probes, and rates every configuration on the published
// security/trust/cost rubric.
//
// All randomness is derived from the scenario seed through SHA-256, so a
// given (config, seed) produces a byte-identical report on any platform.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reviewchain/contracts.hpp"
#include "reviewchain/economics.hpp"
#include "reviewchain/identity.hpp"
#include "reviewchain/ledger.hpp"
#include "reviewchain/retrieval.hpp"
#include "reviewchain/storage.hpp"

namespace reviewchain {

enum class SubmissionPath : std::uint8_t { relay, direct };
enum class FeeMode : std::uint8_t {
    faucet,
    central_miner_zero_price,
    refund_contract
};
enum class RetrievalMode : std::uint8_t { remote, local };

inline std::string name_of(SubmissionPath p) {
    return p == SubmissionPath::relay ? "relay" : "direct";
}
inline std::string name_of(StorageKind k) {
    switch (k) {
        case StorageKind::on_chain: return "on_chain";
        case StorageKind::anchored: return "anchored";
        case StorageKind::content_addressed: return "content_addressed";
    }
    return "?";
}
inline std::string name_of(FeeMode f) {
    switch (f) {
        case FeeMode::faucet: return "faucet";
        case FeeMode::central_miner_zero_price: return "central_miner_zero_price";
        case FeeMode::refund_contract: return "refund_contract";
    }
    return "?";
}
inline std::string name_of(RetrievalMode r) {
    return r == RetrievalMode::remote ? "remote" : "local";
}

struct AdversaryFlags {
    bool censorship = true;
    bool key_extraction = true;
    bool fake_review = true;
    bool duplicate_review = true;
    bool storage_tamper = true;
    bool remote_tamper = true;
};

struct WorkloadConfig {
    std::uint32_t review_count = 100;
    std::uint32_t text_mean_bytes = 89;  // 270,110 bytes over 3,025 reviews
};

struct ScenarioConfig {
    SubmissionPath submission = SubmissionPath::direct;
    AuthKind authorization = AuthKind::access_token;
    StorageKind storage = StorageKind::content_addressed;
    FeeMode fees = FeeMode::refund_contract;
    RetrievalMode retrieval = RetrievalMode::local;
    WorkloadConfig workload;
    AdversaryFlags adversary;
    std::uint64_t seed = 1;
};

// ---------------------------------------------------------------------------
// Config file format (JSON mirroring the fields above)
// ---------------------------------------------------------------------------

inline nlohmann::json config_to_json(const ScenarioConfig& c) {
    nlohmann::json j;
    j["submission"] = name_of(c.submission);
    j["authorization"] = auth_kind_name(c.authorization);
    j["storage"] = name_of(c.storage);
    j["fees"] = name_of(c.fees);
    j["retrieval"] = name_of(c.retrieval);
    j["workload"] = {{"review_count", c.workload.review_count},
                     {"text_mean_bytes", c.workload.text_mean_bytes}};
    j["adversary"] = {{"censorship", c.adversary.censorship},
                      {"key_extraction", c.adversary.key_extraction},
                      {"fake_review", c.adversary.fake_review},
                      {"duplicate_review", c.adversary.duplicate_review},
                      {"storage_tamper", c.adversary.storage_tamper},
                      {"remote_tamper", c.adversary.remote_tamper}};
    j["seed"] = c.seed;
    return j;
}

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
    ScenarioConfig c;
    auto pick = [](const std::string& v,
                   std::initializer_list<std::pair<const char*, int>> opts,
                   const char* field) {
        for (const auto& [name, val] : opts)
            if (v == name) return val;
        throw std::invalid_argument(std::string("config: bad value '") + v +
                                    "' for " + field);
    };
    c.submission = static_cast<SubmissionPath>(
        pick(j.at("submission"), {{"relay", 0}, {"direct", 1}}, "submission"));
    c.authorization = static_cast<AuthKind>(
        pick(j.at("authorization"),
             {{"whitelist", 0}, {"access_token", 1}, {"pool_key", 2}},
             "authorization"));
    c.storage = static_cast<StorageKind>(
        pick(j.at("storage"),
             {{"on_chain", 0}, {"anchored", 1}, {"content_addressed", 2}},
             "storage"));
    c.fees = static_cast<FeeMode>(
        pick(j.at("fees"),
             {{"faucet", 0}, {"central_miner_zero_price", 1},
              {"refund_contract", 2}},
             "fees"));
    c.retrieval = static_cast<RetrievalMode>(
        pick(j.at("retrieval"), {{"remote", 0}, {"local", 1}}, "retrieval"));
    if (j.contains("workload")) {
        c.workload.review_count = j["workload"].value("review_count", 100u);
        c.workload.text_mean_bytes = j["workload"].value("text_mean_bytes", 89u);
    }
    if (j.contains("adversary")) {
        const auto& a = j["adversary"];
        c.adversary.censorship = a.value("censorship", true);
        c.adversary.key_extraction = a.value("key_extraction", true);
        c.adversary.fake_review = a.value("fake_review", true);
        c.adversary.duplicate_review = a.value("duplicate_review", true);
        c.adversary.storage_tamper = a.value("storage_tamper", true);
        c.adversary.remote_tamper = a.value("remote_tamper", true);
    }
    c.seed = j.value("seed", std::uint64_t{1});
    return c;
}

// ---------------------------------------------------------------------------
// Trade-off rubric
// ---------------------------------------------------------------------------

enum class Grade : std::uint8_t { good, medium, poor };

inline std::string grade_name(Grade g) {
    switch (g) {
        case Grade::good: return "Good";
        case Grade::medium: return "Medium";
        case Grade::poor: return "Poor";
    }
    return "?";
}

struct TradeoffRating {
    Grade security = Grade::medium;
    Grade trust = Grade::medium;
    Grade cost = Grade::medium;

    bool operator==(const TradeoffRating&) const = default;
};

// Scored checklist (constants published in the README):
//
// Security starts at 2. The pool key is extractable from the app (-2) and
// a relay holds custodial keys (-2); an open whitelist admits unverified
// registrants (-1). 2 = Good, 1 = Medium, <=0 = Poor.
//
// Trust counts centralized elements: relay backend, faucet website,
// central zero-price miner, central token issuer (access tokens), the
// centralized anchored store, and a remote node each add one.
// 0 = Good, 1 = Medium, >=2 = Poor.
//
// Cost is driven by where review bytes live: full text on chain = Poor,
// content-addressed storage = Medium, centralized store with on-chain
// anchors = Good.
inline TradeoffRating evaluate_tradeoffs(const ScenarioConfig& c) {
    TradeoffRating r;

    int security = 2;
    if (c.authorization == AuthKind::pool_key) security -= 2;
    if (c.submission == SubmissionPath::relay) security -= 2;
    if (c.authorization == AuthKind::whitelist) security -= 1;
    r.security = security >= 2 ? Grade::good
               : security == 1 ? Grade::medium
                               : Grade::poor;

    int centralized = 0;
    if (c.submission == SubmissionPath::relay) ++centralized;
    if (c.fees == FeeMode::faucet) ++centralized;
    if (c.fees == FeeMode::central_miner_zero_price) ++centralized;
    if (c.authorization == AuthKind::access_token) ++centralized;
    if (c.storage == StorageKind::anchored) ++centralized;
    if (c.retrieval == RetrievalMode::remote) ++centralized;
    r.trust = centralized == 0 ? Grade::good
            : centralized == 1 ? Grade::medium
                               : Grade::poor;

    switch (c.storage) {
        case StorageKind::on_chain: r.cost = Grade::poor; break;
        case StorageKind::content_addressed: r.cost = Grade::medium; break;
        case StorageKind::anchored: r.cost = Grade::good; break;
    }
    return r;
}

// The three reference configurations, one optimized per axis.
inline std::vector<std::pair<std::string, ScenarioConfig>> table1_configs() {
    ScenarioConfig security;
    security.submission = SubmissionPath::direct;
    security.authorization = AuthKind::access_token;
    security.storage = StorageKind::content_addressed;
    security.fees = FeeMode::refund_contract;
    security.retrieval = RetrievalMode::local;

    ScenarioConfig trust = security;
    trust.authorization = AuthKind::pool_key;

    ScenarioConfig costs = security;
    costs.storage = StorageKind::anchored;

    return {{"Security", security}, {"Trust", trust}, {"Costs", costs}};
}

inline std::map<std::string, TradeoffRating> table1_expected_ratings() {
    return {{"Security", {Grade::good, Grade::medium, Grade::medium}},
            {"Trust", {Grade::poor, Grade::good, Grade::medium}},
            {"Costs", {Grade::good, Grade::poor, Grade::good}}};
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct SubmissionRecord {
    std::uint32_t human = 0;
    std::string product_id;
    std::string product_version;
    bool accepted = false;
    std::string reason;
};

struct AttackOutcomes {
    // Censorship: targeted author's review missing after the workload.
    bool censorship_ran = false;
    bool censored_review_absent = false;

    // Key extraction: adversary outside the app, using whatever key
    // material the app ships, gets a fake review accepted.
    bool key_extraction_ran = false;
    bool extraction_fake_accepted = false;

    // Fake review: non-purchaser attempts a submission.
    bool fake_review_ran = false;
    bool fake_review_accepted = false;

    // Duplicate: a second review for the same product version. Under the
    // pool key the "duplicate" is a different human, so rejecting it
    // loses a legitimate review.
    bool duplicate_ran = false;
    bool duplicate_second_rejected = false;
    bool legitimate_review_lost = false;

    // Centralized-store mutation; fetch must flag it.
    bool storage_tamper_ran = false;
    bool storage_tamper_detected = false;

    // Remote node rewriting a response; reader must flag it.
    bool remote_tamper_ran = false;
    bool remote_tamper_detected = false;
};

struct ScenarioReport {
    ScenarioConfig config;
    TradeoffRating rating;

    std::vector<SubmissionRecord> submissions;
    std::uint32_t accepted_count = 0;

    AttackOutcomes attacks;

    std::uint64_t stored_payload_bytes_total = 0;
    std::uint64_t storage_gas_total = 0;
    std::uint64_t gas_total = 0;
    std::string eth_cost;  // storage cost at 5 Gwei, $885/ETH
    std::string usd_cost;
    std::string usd_per_review;

    // Author end-to-end balance deltas (Gwei, signed).
    std::map<std::uint32_t, std::int64_t> author_balance_deltas;
    bool all_author_deltas_zero = true;
    Gwei pool_decrements = 0;
    Gwei miner_refunds = 0;

    std::uint32_t verified_count = 0;
    std::uint32_t tampered_count = 0;
    std::uint32_t unavailable_count = 0;
    std::vector<std::string> unsigned_residue;

    std::uint64_t sync_blocks = 0;
    std::uint64_t sync_bytes = 0;
    std::string final_state_root;

    nlohmann::json to_json() const;
    std::string to_text() const;
};

inline nlohmann::json ScenarioReport::to_json() const {
    nlohmann::json j;
    j["config"] = config_to_json(config);
    j["rating"] = {{"security", grade_name(rating.security)},
                   {"trust", grade_name(rating.trust)},
                   {"cost", grade_name(rating.cost)}};
    nlohmann::json subs = nlohmann::json::array();
    for (const auto& s : submissions)
        subs.push_back({{"human", s.human},
                        {"product_id", s.product_id},
                        {"product_version", s.product_version},
                        {"accepted", s.accepted},
                        {"reason", s.reason}});
    j["submissions"] = subs;
    j["accepted_count"] = accepted_count;
    j["attacks"] = {
        {"censorship_ran", attacks.censorship_ran},
        {"censored_review_absent", attacks.censored_review_absent},
        {"key_extraction_ran", attacks.key_extraction_ran},
        {"extraction_fake_accepted", attacks.extraction_fake_accepted},
        {"fake_review_ran", attacks.fake_review_ran},
        {"fake_review_accepted", attacks.fake_review_accepted},
        {"duplicate_ran", attacks.duplicate_ran},
        {"duplicate_second_rejected", attacks.duplicate_second_rejected},
        {"legitimate_review_lost", attacks.legitimate_review_lost},
        {"storage_tamper_ran", attacks.storage_tamper_ran},
        {"storage_tamper_detected", attacks.storage_tamper_detected},
        {"remote_tamper_ran", attacks.remote_tamper_ran},
        {"remote_tamper_detected", attacks.remote_tamper_detected}};
    j["economics"] = {{"stored_payload_bytes", stored_payload_bytes_total},
                      {"storage_gas", storage_gas_total},
                      {"gas_total", gas_total},
                      {"eth_cost", eth_cost},
                      {"usd_cost", usd_cost},
                      {"usd_per_review", usd_per_review}};
    nlohmann::json deltas = nlohmann::json::object();
    for (const auto& [human, delta] : author_balance_deltas)
        deltas[std::to_string(human)] = delta;
    j["author_balance_deltas"] = deltas;
    j["all_author_deltas_zero"] = all_author_deltas_zero;
    j["pool_decrements"] = pool_decrements;
    j["miner_refunds"] = miner_refunds;
    j["verification"] = {{"verified", verified_count},
                         {"tampered", tampered_count},
                         {"unavailable", unavailable_count},
                         {"unsigned_residue", unsigned_residue}};
    j["sync"] = {{"blocks", sync_blocks}, {"bytes", sync_bytes}};
    j["final_state_root"] = final_state_root;
    return j;
}

inline std::string ScenarioReport::to_text() const {
    std::ostringstream out;
    out << "scenario: " << name_of(config.submission) << " / "
        << auth_kind_name(config.authorization) << " / "
        << name_of(config.storage) << " / " << name_of(config.fees) << " / "
        << name_of(config.retrieval) << " (seed " << config.seed << ")\n";
    out << "rating: security=" << grade_name(rating.security)
        << " trust=" << grade_name(rating.trust)
        << " cost=" << grade_name(rating.cost) << "\n";
    out << "submissions: " << accepted_count << "/" << submissions.size()
        << " accepted\n";
    if (attacks.censorship_ran)
        out << "attack censorship: targeted review "
            << (attacks.censored_review_absent ? "ABSENT (censored)" : "present")
            << "\n";
    if (attacks.key_extraction_ran)
        out << "attack key-extraction: fake review "
            << (attacks.extraction_fake_accepted ? "ACCEPTED (weakness)"
                                                 : "rejected")
            << "\n";
    if (attacks.fake_review_ran)
        out << "attack fake-review: "
            << (attacks.fake_review_accepted ? "ACCEPTED (weakness)" : "rejected")
            << "\n";
    if (attacks.duplicate_ran)
        out << "attack duplicate: second submission "
            << (attacks.duplicate_second_rejected ? "rejected" : "accepted")
            << (attacks.legitimate_review_lost
                    ? " — legitimate review LOST (weakness)"
                    : "")
            << "\n";
    if (attacks.storage_tamper_ran)
        out << "attack storage-tamper: "
            << (attacks.storage_tamper_detected ? "detected" : "UNDETECTED")
            << "\n";
    if (attacks.remote_tamper_ran)
        out << "attack remote-tamper: "
            << (attacks.remote_tamper_detected ? "detected" : "UNDETECTED")
            << "\n";
    out << "storage: " << stored_payload_bytes_total << " bytes on chain, "
        << storage_gas_total << " storage gas, total gas " << gas_total << "\n";
    out << "cost @5 Gwei, $885/ETH: " << eth_cost << " ETH, $" << usd_cost
        << " ($" << usd_per_review << "/review)\n";
    out << "authors: " << (all_author_deltas_zero
                               ? "all balance deltas zero"
                               : "NONZERO balance deltas present")
        << "; pool paid " << miner_refunds << " Gwei to miners\n";
    out << "verification: " << verified_count << " verified, " << tampered_count
        << " tampered, " << unavailable_count << " unavailable\n";
    out << "replica sync: " << sync_blocks << " blocks, " << sync_bytes
        << " bytes\n";
    out << "state root: " << final_state_root << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Deterministic seeding helpers
// ---------------------------------------------------------------------------

namespace detail {

inline Seed32 derive_seed(std::uint64_t scenario_seed, std::string_view tag,
                          std::uint64_t index) {
    ByteWriter w;
    w.u64(scenario_seed);
    w.str(tag);
    w.u64(index);
    return sha256(w.data());
}

inline Bytes derive_text(std::uint64_t scenario_seed, std::uint64_t index,
                         std::uint32_t mean_bytes) {
    Digest32 h = derive_seed(scenario_seed, "text", index);
    std::uint64_t raw = 0;
    for (int i = 0; i < 8; ++i) raw = (raw << 8) | h[static_cast<std::size_t>(i)];
    std::size_t len = 1 + raw % (2 * mean_bytes - 1);  // mean ~= mean_bytes
    Bytes text;
    text.reserve(len);
    Digest32 stream = h;
    while (text.size() < len) {
        stream = sha256(stream.data(), stream.size());
        for (std::uint8_t b : stream) {
            if (text.size() == len) break;
            text.push_back(static_cast<std::uint8_t>('a' + b % 26));
        }
    }
    return text;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

class ScenarioRunner {
public:
    explicit ScenarioRunner(ScenarioConfig config)
        : cfg_(std::move(config)),
          backend_(cfg_.storage),
          vendor_(generate_keypair(detail::derive_seed(cfg_.seed, "vendor", 0))),
          miner_(generate_keypair(detail::derive_seed(cfg_.seed, "miner", 0))),
          pool_key_(generate_keypair(detail::derive_seed(cfg_.seed, "pool", 0))),
          adversary_(
              generate_keypair(detail::derive_seed(cfg_.seed, "adversary", 0))),
          outsider_(
              generate_keypair(detail::derive_seed(cfg_.seed, "outsider", 0))),
          trader_(generate_keypair(detail::derive_seed(cfg_.seed, "trader", 0))) {
        for (std::uint32_t i = 0; i < cfg_.workload.review_count; ++i)
            humans_.push_back(
                generate_keypair(detail::derive_seed(cfg_.seed, "human", i)));
    }

    ScenarioReport run();

    const Ledger& ledger() const { return ledger_; }
    StorageBackend& backend() { return backend_; }

private:
    static constexpr std::uint32_t kCensoredHuman = 0;

    // The key a given human signs with: their own, or the bundled pool key.
    const KeyPair& signing_key(std::uint32_t human) const {
        return cfg_.authorization == AuthKind::pool_key ? pool_key_
                                                        : humans_[human];
    }

    Gwei workload_gas_price() const {
        return cfg_.fees == FeeMode::faucet ? 5 : 0;
    }

    MinerPolicy policy() const {
        MinerPolicy p;
        p.min_gas_price = 1;
        p.capacity = 4096;
        p.accept_zero_for_refund_contract = cfg_.fees != FeeMode::faucet;
        return p;
    }

    // Next usable nonce for a sender, counting not-yet-mined submissions.
    std::uint64_t next_nonce(const Address& sender) {
        std::uint64_t state_nonce = ledger_.state().nonce(sender);
        auto it = pending_nonce_.find(sender);
        std::uint64_t n =
            it == pending_nonce_.end() ? state_nonce : std::max(state_nonce, it->second);
        pending_nonce_[sender] = n + 1;
        return n;
    }

    SignedTransaction build(const KeyPair& sender, const Bytes& payload,
                            Gwei price) {
        return build_transaction(sender, review_contract_address(), payload,
                                 price, next_nonce(address_of(sender)),
                                 ledger_.config().schedule);
    }

    // Relay path: the operator holds the keys and may refuse to sign and
    // forward for a targeted human at all, so no nonce is ever consumed.
    bool relay_censors(std::uint32_t human) const {
        return cfg_.submission == SubmissionPath::relay &&
               cfg_.adversary.censorship && human == kCensoredHuman;
    }

    void mine_one() {
        auto outcomes = ledger_.mine(policy(), address_of(miner_));
        const Block& b = ledger_.chain().back();
        for (std::size_t i = 0; i < b.transactions.size(); ++i)
            exec_by_payload_[b.transactions[i].payload] = outcomes[i].exec;
    }

    void mine_all() {
        while (true) {
            auto selected = ledger_.mempool().select(policy());
            if (selected.empty()) break;
            mine_one();
            if (ledger_.chain().back().transactions.empty()) {
                // Nothing selectable could apply; drop the stuck leftovers.
                ledger_.mempool().remove(selected);
                break;
            }
        }
        pending_nonce_.clear();
    }

    Review make_review(const KeyPair& author_key, const std::string& product,
                       const std::string& version, std::uint8_t rating,
                       const Bytes& text) {
        Review rv;
        rv.product_id = product;
        rv.product_version = version;
        rv.rating = rating;
        rv.storage_ref = backend_.store_payload(text);
        rv.text_digest = sha256(backend_.codec().encode(text));
        rv.author = address_of(author_key);
        rv.author_public_key = author_key.public_key;
        rv.author_signature =
            sign(review_signing_message(rv.product_id, rv.product_version,
                                        rv.rating, rv.text_digest),
                 author_key);
        return rv;
    }

    // Send one contract call, mine, and return the contract outcome.
    ExecResult transact(const KeyPair& sender, const Bytes& payload, Gwei price) {
        SignedTransaction tx = build(sender, payload, price);
        AdmitResult admit = ledger_.submit(tx);
        if (!admit.admitted) {
            pending_nonce_.clear();
            return ExecResult::rejected(admit.reason);
        }
        mine_one();
        pending_nonce_.clear();
        auto it = exec_by_payload_.find(tx.payload);
        if (it == exec_by_payload_.end()) {
            ledger_.mempool().remove({tx});
            return ExecResult::rejected("not mined under current policy");
        }
        return it->second;
    }

    ExecResult probe_submit(const KeyPair& key, const std::string& version,
                            Gwei price) {
        Bytes text = to_bytes("probe review for " + version);
        Review rv = make_review(key, "app-1", version, 3, text);
        return transact(key, call::submit_review(rv), price);
    }

    void run_attacks(ScenarioReport& report);

    ScenarioConfig cfg_;
    StorageBackend backend_;
    Ledger ledger_;
    KeyPair vendor_, miner_, pool_key_, adversary_, outsider_, trader_;
    std::vector<KeyPair> humans_;
    std::map<Address, std::uint64_t> pending_nonce_;
    std::map<Bytes, ExecResult> exec_by_payload_;
};

inline void ScenarioRunner::run_attacks(ScenarioReport& report) {
    const Gwei price = workload_gas_price();
    const std::string product = "app-1";

    // Censorship outcome: is the targeted human's workload review present?
    if (cfg_.adversary.censorship && !humans_.empty()) {
        report.attacks.censorship_ran = true;
        report.attacks.censored_review_absent = !has_reviewed(
            ledger_.state().review_contract(),
            address_of(signing_key(kCensoredHuman)), product,
            "1." + std::to_string(kCensoredHuman));
    }

    // Fake review: the adversary never purchased anything.
    if (cfg_.adversary.fake_review) {
        report.attacks.fake_review_ran = true;
        ExecResult res = ExecResult::rejected("unreachable");
        switch (cfg_.authorization) {
            case AuthKind::whitelist:
                // Open registration lets the adversary whitelist themselves.
                transact(adversary_,
                         call::whitelist_register(address_of(adversary_)),
                         price);
                res = probe_submit(adversary_, "fake-test", price);
                break;
            case AuthKind::access_token:
                res = probe_submit(adversary_, "fake-test", price);
                break;
            case AuthKind::pool_key:
                // The signing key ships inside the app package.
                res = probe_submit(pool_key_, "fake-test", price);
                break;
        }
        report.attacks.fake_review_accepted = res.ok;
    }

    // Key extraction: adversary outside the app, no registration step.
    if (cfg_.adversary.key_extraction) {
        report.attacks.key_extraction_ran = true;
        const KeyPair& key = cfg_.authorization == AuthKind::pool_key
                                 ? pool_key_  // extracted from the app bundle
                                 : outsider_;
        ExecResult res = probe_submit(key, "extraction-test", price);
        report.attacks.extraction_fake_accepted = res.ok;
    }

    // Duplicate review for one shared product version.
    if (cfg_.adversary.duplicate_review && humans_.size() >= 3) {
        report.attacks.duplicate_ran = true;
        const std::string version = "dup-test";
        ExecResult first = ExecResult::rejected("unreachable");
        ExecResult second = ExecResult::rejected("unreachable");
        if (cfg_.authorization == AuthKind::pool_key) {
            // Two different humans behind the one shared address.
            first = probe_submit(signing_key(1), version, price);
            second = probe_submit(signing_key(2), version, price);
            report.attacks.legitimate_review_lost = first.ok && !second.ok;
        } else {
            if (cfg_.authorization == AuthKind::access_token) {
                PurchaseReceipt receipt;
                receipt.buyer = address_of(humans_[1]);
                receipt.product_id = product;
                receipt.product_version = version;
                receipt.vendor_signature = sign(
                    receipt_signing_message(receipt.buyer, product, version),
                    vendor_);
                transact(vendor_, call::issue_token(receipt), 5);
            }
            first = probe_submit(humans_[1], version, price);
            second = probe_submit(humans_[1], version, price);
        }
        report.attacks.duplicate_second_rejected = first.ok && !second.ok;
    }

    // Centralized-store mutation: operator rewrites stored review bytes.
    if (cfg_.adversary.storage_tamper && cfg_.storage == StorageKind::anchored) {
        for (const auto& rv : ledger_.state().review_contract().reviews) {
            const auto* an = std::get_if<AnchoredRef>(&rv.storage_ref);
            if (!an) continue;
            report.attacks.storage_tamper_ran = true;
            backend_.tamper_centralized(an->locator,
                                        to_bytes("five stars, definitely"));
            report.attacks.storage_tamper_detected =
                verify_review(rv, backend_).status ==
                VerificationStatus::tampered;
            break;
        }
    }
}

inline ScenarioReport ScenarioRunner::run() {
    ScenarioReport report;
    report.config = cfg_;
    report.rating = evaluate_tradeoffs(cfg_);

    const Address vendor_addr = address_of(vendor_);
    const Address miner_addr = address_of(miner_);
    const Address contract = review_contract_address();
    const Gwei price = workload_gas_price();
    const std::string product = "app-1";

    // --- funding -----------------------------------------------------
    ledger_.faucet(vendor_addr, 5'000'000'000'000'000ULL);
    ledger_.faucet(address_of(trader_), 1'000'000'000'000'000ULL);
    if (cfg_.fees == FeeMode::faucet) {
        for (const auto& h : humans_)
            ledger_.faucet(address_of(h), 100'000'000'000ULL);
        if (cfg_.authorization == AuthKind::pool_key)
            ledger_.faucet(address_of(pool_key_), 10'000'000'000'000ULL);
        // The faucet website cannot tell reviewers from freeloaders.
        ledger_.faucet(address_of(adversary_), 100'000'000'000ULL);
        ledger_.faucet(address_of(outsider_), 100'000'000'000ULL);
    }

    // --- contract setup ----------------------------------------------
    AuthorizationMode mode;
    switch (cfg_.authorization) {
        case AuthKind::whitelist: mode = WhitelistMode{{}, true}; break;
        case AuthKind::access_token: mode = AccessTokenMode{}; break;
        case AuthKind::pool_key:
            mode = PoolKeyMode{address_of(pool_key_)};
            break;
    }
    transact(vendor_, call::set_mode(mode), 5);
    transact(vendor_, call::register_vendor(product, vendor_.public_key), 5);

    // Seed paid-fee history so the refund median is meaningful: plain
    // transfers at 5, 22, 22 Gwei.
    for (Gwei p : {Gwei{5}, Gwei{22}, Gwei{22}}) {
        SignedTransaction tx = build_transaction(
            trader_, vendor_addr, {}, p,
            ledger_.state().nonce(address_of(trader_)),
            ledger_.config().schedule);
        ledger_.submit(tx);
        mine_one();
    }
    pending_nonce_.clear();

    if (cfg_.fees == FeeMode::refund_contract)
        transact(vendor_, call::deposit_pool(2'000'000'000'000ULL), 5);

    // Authors tracked for the end-to-end zero-cost requirement.
    auto snapshot_balances = [&] {
        std::map<std::uint32_t, Gwei> snap;
        for (std::uint32_t i = 0; i < humans_.size(); ++i)
            snap[i] = ledger_.state().balance(address_of(humans_[i]));
        return snap;
    };
    std::map<std::uint32_t, Gwei> balances_before = snapshot_balances();

    // --- authorization grants ----------------------------------------
    if (cfg_.authorization == AuthKind::whitelist) {
        for (std::uint32_t i = 0; i < humans_.size(); ++i) {
            if (relay_censors(i)) continue;
            ledger_.submit(build(
                humans_[i], call::whitelist_register(address_of(humans_[i])),
                price));
        }
        mine_all();
    } else if (cfg_.authorization == AuthKind::access_token) {
        for (std::uint32_t i = 0; i < humans_.size(); ++i) {
            std::string version = "1." + std::to_string(i);
            PurchaseReceipt receipt;
            receipt.buyer = address_of(humans_[i]);
            receipt.product_id = product;
            receipt.product_version = version;
            receipt.vendor_signature =
                sign(receipt_signing_message(receipt.buyer, product, version),
                     vendor_);
            ledger_.submit(build(vendor_, call::issue_token(receipt), 5));
        }
        mine_all();
    }

    // --- review submissions ------------------------------------------
    // Human i reviews product version 1.i, so versions are distinct and
    // every mode can accept the full workload; the duplicate probe
    // exercises the shared-version case.
    std::vector<std::optional<Bytes>> submitted_payload(humans_.size());
    for (std::uint32_t i = 0; i < humans_.size(); ++i) {
        std::string version = "1." + std::to_string(i);
        Bytes text =
            detail::derive_text(cfg_.seed, i, cfg_.workload.text_mean_bytes);
        Digest32 h = detail::derive_seed(cfg_.seed, "rating", i);
        auto rating = static_cast<std::uint8_t>(1 + h[0] % 5);
        Review rv = make_review(signing_key(i), product, version, rating, text);
        if (relay_censors(i)) {
            report.submissions.push_back(
                {i, product, version, false, "dropped by relay operator"});
            continue;
        }
        SignedTransaction tx = build(signing_key(i), call::submit_review(rv), price);
        AdmitResult admit = ledger_.submit(tx);
        report.submissions.push_back(
            {i, product, version, admit.admitted, admit.reason});
        if (admit.admitted) submitted_payload[i] = tx.payload;
    }
    mine_all();

    // Fold in contract-level outcomes recorded at mining time.
    for (std::uint32_t i = 0; i < humans_.size(); ++i) {
        auto& rec = report.submissions[i];
        if (!rec.accepted) continue;
        auto it = exec_by_payload_.find(*submitted_payload[i]);
        if (it == exec_by_payload_.end()) {
            rec.accepted = false;
            rec.reason = "not mined";
        } else {
            rec.accepted = it->second.ok;
            rec.reason = it->second.reason;
        }
    }
    for (const auto& rec : report.submissions)
        if (rec.accepted) ++report.accepted_count;

    // --- miner refund claims -----------------------------------------
    if (cfg_.fees == FeeMode::refund_contract) {
        std::vector<std::pair<Digest32, std::uint32_t>> claims;
        for (const auto& b : ledger_.chain()) {
            Digest32 digest = block_digest(b);
            for (std::uint32_t i = 0; i < b.transactions.size(); ++i) {
                const auto& tx = b.transactions[i];
                if (tx.recipient != contract || tx.gas_price != 0) continue;
                if (!tx.payload.empty() &&
                    static_cast<Method>(tx.payload[0]) == Method::claim_refund)
                    continue;
                claims.emplace_back(digest, i);
            }
        }
        for (const auto& [digest, idx] : claims)
            transact(miner_, call::claim_refund(digest, idx), 0);
    }

    // --- attack probes ------------------------------------------------
    run_attacks(report);

    // --- verification via the configured reader ----------------------
    std::string dump = ledger_.dump_chain();
    std::vector<VerifiedReview> listed;
    if (cfg_.retrieval == RetrievalMode::local) {
        LocalReplicaReader reader(backend_, ledger_.config());
        SyncStats stats = reader.sync(dump);
        report.sync_blocks = stats.blocks;
        report.sync_bytes = stats.bytes;
        listed = reader.list_reviews(product);
    } else {
        RemoteNodeReader reader(ledger_, backend_);
        if (cfg_.adversary.remote_tamper) {
            // The node rewrites the first listed rating.
            bool done = false;
            reader.set_tamper_hook([done](Review& rv) mutable {
                if (!done) {
                    rv.rating = rv.rating == 5 ? 1 : 5;
                    done = true;
                }
            });
            report.attacks.remote_tamper_ran = true;
        }
        listed = reader.list_reviews(product);
    }
    for (const auto& vr : listed) {
        switch (vr.status) {
            case VerificationStatus::verified: ++report.verified_count; break;
            case VerificationStatus::tampered: ++report.tampered_count; break;
            case VerificationStatus::unavailable:
                ++report.unavailable_count;
                break;
        }
    }
    if (report.attacks.remote_tamper_ran)
        report.attacks.remote_tamper_detected = report.tampered_count > 0;
    report.unsigned_residue = unsigned_residue_fields();

    // --- economics ----------------------------------------------------
    for (const auto& b : ledger_.chain())
        for (const auto& tx : b.transactions) {
            std::uint64_t gas =
                gas_used_for(tx.payload, ledger_.config().schedule);
            report.gas_total += gas;
            std::size_t stored = stored_payload_bytes(tx.payload);
            report.stored_payload_bytes_total += stored;
            report.storage_gas_total +=
                ledger_.config().schedule.storage_gas_per_byte * stored;
        }
    CostQuote quote =
        storage_cost(report.stored_payload_bytes_total, 5, Rational(885));
    report.eth_cost = format_rounded(quote.eth, 8);
    report.usd_cost = format_rounded(quote.usd, 2);
    report.usd_per_review =
        report.accepted_count > 0
            ? format_rounded(per_review_cost(quote, report.accepted_count), 3)
            : "0";

    // --- zero-cost-to-author accounting ------------------------------
    std::map<std::uint32_t, Gwei> balances_after = snapshot_balances();
    for (const auto& [human, before] : balances_before) {
        auto delta = static_cast<std::int64_t>(balances_after[human]) -
                     static_cast<std::int64_t>(before);
        report.author_balance_deltas[human] = delta;
        if (delta != 0) report.all_author_deltas_zero = false;
    }
    const RefundPool& pool = ledger_.state().review_contract().pool;
    report.pool_decrements = pool.total_deposits() - pool.balance;
    report.miner_refunds = pool.total_refunds();

    report.final_state_root = digest_hex(state_root(ledger_.state()));
    return report;
}

inline ScenarioReport run_scenario(const ScenarioConfig& config) {
    ScenarioRunner runner(config);
    return runner.run();
}

}  // namespace reviewchain
