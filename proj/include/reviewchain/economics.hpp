#pragma once

// Gas and fiat cost arithmetic in exact rationals. Rounding happens only
// at presentation, never inside a computation.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace reviewchain {

using Rational = boost::multiprecision::cpp_rational;

struct GasPricePreset {
    std::string name;
    std::uint64_t gwei;
};

// Named price points: fast inclusion (<5 min) vs. the 1,500-block median.
inline GasPricePreset fast_price_preset() { return {"fast (<5 min)", 5}; }
inline GasPricePreset median_price_preset() {
    return {"median, 1,500-block window", 22};
}

struct CostQuote {
    std::uint64_t bytes = 0;
    std::uint64_t gas = 0;
    std::uint64_t gas_price_gwei = 0;
    Rational eth;
    Rational usd;
    std::optional<Rational> usd_per_review;
};

inline CostQuote storage_cost(std::uint64_t bytes, std::uint64_t gas_price_gwei,
                              const Rational& eth_usd_rate,
                              std::uint64_t gas_per_byte = 625) {
    CostQuote q;
    q.bytes = bytes;
    q.gas = gas_per_byte * bytes;
    q.gas_price_gwei = gas_price_gwei;
    q.eth = Rational(q.gas) * gas_price_gwei / 1'000'000'000;
    q.usd = q.eth * eth_usd_rate;
    return q;
}

inline Rational per_review_cost(const CostQuote& quote,
                                std::uint64_t review_count) {
    if (review_count == 0)
        throw std::invalid_argument("per_review_cost: zero review count");
    return quote.usd / review_count;
}

// Round half away from zero to `decimals` places, as a display string.
inline std::string format_rounded(const Rational& value, int decimals) {
    using boost::multiprecision::cpp_int;
    cpp_int scale = 1;
    for (int i = 0; i < decimals; ++i) scale *= 10;
    Rational scaled = value * scale;
    cpp_int num = numerator(scaled), den = denominator(scaled);
    cpp_int rounded = (2 * num + den) / (2 * den);  // half up for positives
    std::string digits = rounded.str();
    if (decimals == 0) return digits;
    while (digits.size() <= static_cast<std::size_t>(decimals))
        digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - decimals, '.');
    return digits;
}

inline double to_double(const Rational& r) {
    return static_cast<double>(r);
}

}  // namespace reviewchain
