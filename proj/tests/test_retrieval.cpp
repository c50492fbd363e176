#include <catch2/catch_amalgamated.hpp>

#include "reviewchain/retrieval.hpp"

using namespace reviewchain;

namespace {

KeyPair key_of(std::uint8_t fill) {
    Seed32 s{};
    s.fill(fill);
    return generate_keypair(s);
}

// A small chain with three reviews through a shared storage backend.
struct Fixture {
    StorageBackend backend{StorageKind::content_addressed};
    Ledger ledger;
    KeyPair author = key_of(1);
    KeyPair miner_key = key_of(2);
    Address miner = address_of(miner_key);
    MinerPolicy policy{1, false, 100};

    Fixture() {
        ledger.faucet(address_of(author), 1'000'000'000);
        submit(call::whitelist_register(address_of(author)));
        submit(call::submit_review(make_review("app-1", "1.0", 5, "superb")));
        submit(call::submit_review(make_review("app-1", "1.1", 3, "regressed")));
        submit(call::submit_review(make_review("app-2", "1.0", 4, "other app")));
    }

    Review make_review(const std::string& product, const std::string& version,
                       std::uint8_t rating, const std::string& text) {
        Review rv;
        rv.product_id = product;
        rv.product_version = version;
        rv.rating = rating;
        rv.storage_ref = backend.store_payload(to_bytes(text));
        rv.text_digest = sha256(backend.codec().encode(to_bytes(text)));
        rv.author = address_of(author);
        rv.author_public_key = author.public_key;
        rv.author_signature = sign(review_signing_message(rv), author);
        return rv;
    }

    void submit(Bytes payload) {
        std::uint64_t nonce = ledger.state().nonce(address_of(author));
        SignedTransaction tx = build_transaction(
            author, review_contract_address(), std::move(payload), 5, nonce);
        REQUIRE(ledger.submit(tx).admitted);
        auto outcomes = ledger.mine(policy, miner);
        REQUIRE(outcomes.size() == 1);
        REQUIRE(outcomes[0].exec.ok);
    }
};

}  // namespace

TEST_CASE("verify_review accepts an untouched review") {
    Fixture fx;
    const Review& rv = fx.ledger.state().review_contract().reviews[0];
    VerifiedReview vr = verify_review(rv, fx.backend);
    CHECK(vr.status == VerificationStatus::verified);
}

TEST_CASE("verify_review flags any rewritten signed field") {
    Fixture fx;
    const Review& original = fx.ledger.state().review_contract().reviews[0];

    Review rating_flip = original;
    rating_flip.rating = 1;
    CHECK(verify_review(rating_flip, fx.backend).status ==
          VerificationStatus::tampered);

    Review version_swap = original;
    version_swap.product_version = "9.9";
    CHECK(verify_review(version_swap, fx.backend).status ==
          VerificationStatus::tampered);

    Review digest_swap = original;
    digest_swap.text_digest = sha256(to_bytes("replacement text"));
    CHECK(verify_review(digest_swap, fx.backend).status ==
          VerificationStatus::tampered);

    Review author_swap = original;
    KeyPair mallory = key_of(9);
    author_swap.author = address_of(mallory);
    author_swap.author_public_key = mallory.public_key;
    CHECK(verify_review(author_swap, fx.backend).status ==
          VerificationStatus::tampered);

    // The storage ref itself cannot be silently redirected either: pointing
    // at different stored bytes breaks the digest comparison.
    Review ref_swap = original;
    ref_swap.storage_ref = fx.backend.store_payload(to_bytes("decoy"));
    CHECK(verify_review(ref_swap, fx.backend).status ==
          VerificationStatus::tampered);
}

TEST_CASE("every content field is covered; the unsigned residue is empty") {
    CHECK(unsigned_residue_fields().empty());
}

TEST_CASE("missing payload reports unavailable, not verified") {
    Fixture fx;
    Review rv = fx.ledger.state().review_contract().reviews[0];
    StorageBackend empty(StorageKind::content_addressed);
    VerifiedReview vr = verify_review(rv, empty);
    CHECK(vr.status == VerificationStatus::unavailable);
}

TEST_CASE("local replica: sync from dump, list and verify by product/version") {
    Fixture fx;
    LocalReplicaReader reader(fx.backend);
    SyncStats stats = reader.sync(fx.ledger.dump_chain());
    CHECK(stats.blocks == 4);
    CHECK(stats.bytes == fx.ledger.dump_chain().size());
    CHECK(reader.state_root_digest() == state_root(fx.ledger.state()));

    auto all = reader.list_reviews("app-1");
    REQUIRE(all.size() == 2);
    for (const auto& vr : all)
        CHECK(vr.status == VerificationStatus::verified);

    auto v11 = reader.list_reviews("app-1", std::string("1.1"));
    REQUIRE(v11.size() == 1);
    CHECK(v11[0].review.rating == 3);

    CHECK(reader.list_reviews("app-3").empty());
}

TEST_CASE("local replica sync is idempotent") {
    Fixture fx;
    LocalReplicaReader reader(fx.backend);
    std::string dump = fx.ledger.dump_chain();
    reader.sync(dump);
    Digest32 first = reader.state_root_digest();
    reader.sync(dump);
    CHECK(reader.state_root_digest() == first);
}

TEST_CASE("truncated or corrupted dumps fail to sync") {
    Fixture fx;
    LocalReplicaReader reader(fx.backend);
    std::string dump = fx.ledger.dump_chain();

    // Drop the final record: the remaining prefix still replays.
    std::string truncated = dump.substr(0, dump.find_last_of('\n', dump.size() - 2) + 1);
    SyncStats stats = reader.sync(truncated);
    CHECK(stats.blocks == 3);

    // Corrupt one hex digit inside a transaction: replay must fail loudly.
    std::string corrupted = dump;
    std::size_t pos = corrupted.find("\"transactions\":[\"");
    REQUIRE(pos != std::string::npos);
    pos += std::string("\"transactions\":[\"").size() + 10;
    corrupted[pos] = corrupted[pos] == '0' ? '1' : '0';
    CHECK_THROWS(reader.sync(corrupted));
}

TEST_CASE("remote reader: honest node answers verify") {
    Fixture fx;
    RemoteNodeReader reader(fx.ledger, fx.backend);
    auto all = reader.list_reviews("app-1");
    REQUIRE(all.size() == 2);
    for (const auto& vr : all)
        CHECK(vr.status == VerificationStatus::verified);
}

TEST_CASE("remote reader: a node rewriting ratings is caught") {
    Fixture fx;
    RemoteNodeReader reader(fx.ledger, fx.backend);
    reader.set_tamper_hook([](Review& rv) {
        if (rv.product_version == "1.1") rv.rating = 5;  // inflate the bad one
    });
    auto all = reader.list_reviews("app-1");
    REQUIRE(all.size() == 2);
    int tampered = 0;
    for (const auto& vr : all) {
        if (vr.status == VerificationStatus::tampered) {
            ++tampered;
            CHECK(vr.review.product_version == "1.1");
        }
    }
    CHECK(tampered == 1);
}

TEST_CASE("centralized storage tamper surfaces through retrieval") {
    StorageBackend backend(StorageKind::anchored);
    Ledger ledger;
    KeyPair author = key_of(3), miner_key = key_of(4);
    ledger.faucet(address_of(author), 1'000'000'000);

    auto send = [&](Bytes payload) {
        SignedTransaction tx = build_transaction(
            author, review_contract_address(), std::move(payload), 5,
            ledger.state().nonce(address_of(author)));
        REQUIRE(ledger.submit(tx).admitted);
        auto outcomes = ledger.mine({1, false, 100}, address_of(miner_key));
        REQUIRE(outcomes[0].exec.ok);
    };
    send(call::whitelist_register(address_of(author)));

    Review rv;
    rv.product_id = "app-1";
    rv.product_version = "1.0";
    rv.rating = 5;
    rv.storage_ref = backend.store_payload(to_bytes("honest words"));
    rv.text_digest = sha256(to_bytes("honest words"));
    rv.author = address_of(author);
    rv.author_public_key = author.public_key;
    rv.author_signature = sign(review_signing_message(rv), author);
    send(call::submit_review(rv));

    RemoteNodeReader reader(ledger, backend);
    REQUIRE(reader.list_reviews("app-1")[0].status ==
            VerificationStatus::verified);

    const auto& an = std::get<AnchoredRef>(
        ledger.state().review_contract().reviews[0].storage_ref);
    backend.tamper_centralized(an.locator, to_bytes("doctored words"));
    CHECK(reader.list_reviews("app-1")[0].status ==
          VerificationStatus::tampered);
}
