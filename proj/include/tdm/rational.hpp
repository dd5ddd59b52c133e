#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace tdm {

/// Exact non-negative fraction. Not normalized: 7/13 and 14/26 compare equal
/// but keep their own numerator and denominator.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    double to_double() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    Rational reduced() const;

    /// Decimal rendering rounded half-up to `places` digits, e.g. 7/13 -> "0.54".
    std::string to_fixed(int places) const;

    /// Exact decimal rendering; only valid when den divides a power of ten.
    std::string to_decimal() const;

    /// Parses a plain decimal such as "0.6", "1", ".25" (at most 12 fraction digits).
    static Rational parse_decimal(std::string_view text);

    friend bool operator==(const Rational& a, const Rational& b) noexcept {
        return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
        auto l = static_cast<__int128>(a.num) * b.den;
        auto r = static_cast<__int128>(b.num) * a.den;
        return l <=> r;
    }
};

} // namespace tdm
