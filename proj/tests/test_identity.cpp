#include <catch2/catch_amalgamated.hpp>

#include "reviewchain/identity.hpp"

using namespace reviewchain;

namespace {

Seed32 seed_of(std::uint8_t fill) {
    Seed32 s{};
    s.fill(fill);
    return s;
}

KeyPair keypair_from_index(std::uint64_t i) {
    ByteWriter w;
    w.u64(i);
    return generate_keypair(sha256(w.data()));
}

}  // namespace

TEST_CASE("keypair generation is deterministic and seed-sensitive") {
    KeyPair a1 = generate_keypair(seed_of(0));
    KeyPair a2 = generate_keypair(seed_of(0));
    KeyPair b = generate_keypair(seed_of(1));
    CHECK(a1 == a2);
    CHECK(a1.public_key != b.public_key);
}

TEST_CASE("zero-seed keypair matches golden reference values") {
    // Frozen from an independent Ed25519 + SHA-256 reference tool.
    KeyPair kp = generate_keypair(seed_of(0));
    CHECK(hex_encode(kp.public_key) ==
          "3b6a27bcceb6a42d62a3a8d02a6f0d73653215771de243a63ac048a18b59da29");
    CHECK(derive_address(kp.public_key).hex() ==
          "a0d741628fc826e09475d341a780acde3c4b8070");
}

TEST_CASE("malformed seed length is rejected") {
    CHECK_THROWS_AS(generate_keypair(Bytes(31, 0)), std::invalid_argument);
    CHECK_THROWS_AS(generate_keypair(Bytes(33, 0)), std::invalid_argument);
}

TEST_CASE("address derivation is a pure function") {
    KeyPair kp = generate_keypair(seed_of(7));
    Address first = derive_address(kp.public_key);
    for (int i = 0; i < 1000; ++i)
        REQUIRE(derive_address(kp.public_key) == first);
}

TEST_CASE("distinct keys get distinct addresses") {
    CHECK(derive_address(keypair_from_index(1).public_key) !=
          derive_address(keypair_from_index(2).public_key));
    CHECK_THROWS_AS(derive_address(Bytes(16, 0)), std::invalid_argument);
}

TEST_CASE("sign/verify round trip and tamper rejection") {
    KeyPair kp = generate_keypair(seed_of(3));
    Bytes msg = to_bytes("rating update for app-1");
    Signature sig = sign(msg, kp);
    CHECK(verify(msg, sig, kp.public_key));

    Bytes flipped = msg;
    flipped[4] ^= 0x01;
    CHECK_FALSE(verify(flipped, sig, kp.public_key));

    KeyPair other = generate_keypair(seed_of(4));
    CHECK_FALSE(verify(msg, sig, other.public_key));
}

TEST_CASE("malformed signatures verify false without throwing") {
    KeyPair kp = generate_keypair(seed_of(5));
    Bytes msg = to_bytes("m");
    CHECK_FALSE(verify(msg, Signature{}, kp.public_key));
    CHECK_FALSE(verify(msg, Signature(63, 0xab), kp.public_key));
    CHECK_FALSE(verify(msg, Signature(64, 0xab), kp.public_key));
    CHECK_FALSE(verify(msg, sign(msg, kp), Bytes(5, 1)));
}

TEST_CASE("property: verify holds for signed messages and fails for others") {
    for (std::uint64_t i = 0; i < 50; ++i) {
        KeyPair kp = keypair_from_index(i);
        Digest32 h = sha256(std::string("msg-") + std::to_string(i));
        Bytes msg(h.begin(), h.begin() + 1 + static_cast<int>(i % 31));
        Signature sig = sign(msg, kp);
        REQUIRE(verify(msg, sig, kp.public_key));
        Bytes altered = msg;
        altered[i % altered.size()] ^= 0x80;
        REQUIRE_FALSE(verify(altered, sig, kp.public_key));
    }
}

TEST_CASE("keystore round trip under both presets") {
    KeyPair kp = generate_keypair(seed_of(9));
    Bytes salt(16, 0x5a);
    for (KdfPreset preset : {KdfPreset::light, KdfPreset::standard}) {
        Keystore ks = keystore_encrypt(kp, "correct horse", preset, salt);
        KeyPair back = keystore_decrypt(ks, "correct horse");
        CHECK(back == kp);
    }
}

TEST_CASE("keystore rejects wrong passphrase via MAC") {
    KeyPair kp = generate_keypair(seed_of(10));
    Keystore ks = keystore_encrypt(kp, "right", KdfPreset::light, Bytes(16, 1));
    CHECK_THROWS(keystore_decrypt(ks, "wrong"));
    CHECK_THROWS(keystore_encrypt(kp, "", KdfPreset::light, Bytes(16, 1)));
}

TEST_CASE("keystore tamper evidence: any single-byte mutation is rejected") {
    KeyPair kp = generate_keypair(seed_of(11));
    Keystore good = keystore_encrypt(kp, "pw", KdfPreset::light, Bytes(16, 2));

    for (std::size_t i = 0; i < good.ciphertext.size(); ++i) {
        Keystore ks = good;
        ks.ciphertext[i] ^= 0x01;
        REQUIRE_THROWS(keystore_decrypt(ks, "pw"));
    }
    for (std::size_t i = 0; i < good.mac.size(); ++i) {
        Keystore ks = good;
        ks.mac[i] ^= 0x01;
        REQUIRE_THROWS(keystore_decrypt(ks, "pw"));
    }
    for (std::size_t i = 0; i < good.kdf_salt.size(); ++i) {
        Keystore ks = good;
        ks.kdf_salt[i] ^= 0x01;
        REQUIRE_THROWS(keystore_decrypt(ks, "pw"));
    }
}

TEST_CASE("standard preset does strictly more KDF work than light") {
    CHECK(kdf_iterations(KdfPreset::standard) > kdf_iterations(KdfPreset::light));
    CHECK(kdf_iterations(KdfPreset::light) == (1u << 12));
    CHECK(kdf_iterations(KdfPreset::standard) == (1u << 18));
}

TEST_CASE("keystore file format round trips with lowercase hex fields") {
    KeyPair kp = generate_keypair(seed_of(12));
    Keystore ks = keystore_encrypt(kp, "pw", KdfPreset::standard, Bytes(16, 3));
    std::string text = keystore_to_text(ks);
    CHECK(text.find("\"kdf_preset\"") != std::string::npos);
    CHECK(text.find("\"salt_hex\"") != std::string::npos);
    for (char c : text) CHECK_FALSE((c >= 'A' && c <= 'F'));

    Keystore back = keystore_from_text(text);
    CHECK(back.ciphertext == ks.ciphertext);
    CHECK(back.mac == ks.mac);
    CHECK(back.kdf_salt == ks.kdf_salt);
    CHECK(back.kdf_preset == ks.kdf_preset);
    CHECK(keystore_decrypt(back, "pw") == kp);
}
