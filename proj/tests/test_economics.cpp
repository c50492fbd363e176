#include <catch2/catch_amalgamated.hpp>

#include "reviewchain/economics.hpp"

using namespace reviewchain;

TEST_CASE("reference release figures at 5 Gwei") {
    CostQuote q = storage_cost(270'110, 5, Rational(885));
    CHECK(q.gas == 168'818'750);
    CHECK(q.eth == Rational(84409375, 100000000));  // 0.84409375 exactly
    CHECK(format_rounded(q.usd, 0) == "747");
    CHECK(format_rounded(per_review_cost(q, 3'025), 3) == "0.247");
}

TEST_CASE("reference release figures at 22 Gwei") {
    CostQuote q = storage_cost(270'110, 22, Rational(885));
    CHECK(format_rounded(q.usd, 0) == "3287");
    CHECK(format_rounded(per_review_cost(q, 3'025), 2) == "1.09");
}

TEST_CASE("zero bytes cost nothing") {
    CostQuote q = storage_cost(0, 22, Rational(885));
    CHECK(q.gas == 0);
    CHECK(q.eth == 0);
    CHECK(q.usd == 0);
}

TEST_CASE("per-review cost divides and rejects zero counts") {
    CostQuote q = storage_cost(1000, 10, Rational(100));
    CHECK(per_review_cost(q, 1) == q.usd);
    CHECK_THROWS_AS(per_review_cost(q, 0), std::invalid_argument);
}

TEST_CASE("gas is linear in bytes") {
    for (std::uint64_t a : {0ULL, 1ULL, 89ULL, 4096ULL})
        for (std::uint64_t b : {1ULL, 270'110ULL, 12'345ULL}) {
            auto qa = storage_cost(a, 5, Rational(885));
            auto qb = storage_cost(b, 5, Rational(885));
            auto qab = storage_cost(a + b, 5, Rational(885));
            REQUIRE(qab.gas == qa.gas + qb.gas);
            REQUIRE(qab.usd == qa.usd + qb.usd);
        }
}

TEST_CASE("usd is strictly monotone in gas price for nonzero bytes") {
    auto lo = storage_cost(89, 5, Rational(885));
    auto hi = storage_cost(89, 22, Rational(885));
    CHECK(lo.usd < hi.usd);
}

TEST_CASE("price presets carry the published labels") {
    CHECK(fast_price_preset().gwei == 5);
    CHECK(median_price_preset().gwei == 22);
}

TEST_CASE("display rounding rounds half away from zero") {
    CHECK(format_rounded(Rational(1, 2), 0) == "1");
    CHECK(format_rounded(Rational(247, 1000), 3) == "0.247");
    CHECK(format_rounded(Rational(10866, 10000), 2) == "1.09");
}
