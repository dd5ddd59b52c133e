#include "tdm/rational.hpp"

#include <fmt/format.h>
#include <numeric>
#include <stdexcept>

namespace tdm {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (d <= 0) throw std::invalid_argument("rational denominator must be positive");
    if (n < 0) throw std::invalid_argument("rational numerator must be non-negative");
}

Rational Rational::reduced() const {
    auto g = std::gcd(num, den);
    if (g == 0) return {0, 1};
    return {num / g, den / g};
}

std::string Rational::to_fixed(int places) const {
    __int128 scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    // round(num * scale / den) with ties away from zero
    __int128 scaled = (static_cast<__int128>(num) * scale * 2 + den) / (static_cast<__int128>(den) * 2);
    auto whole = static_cast<std::int64_t>(scaled / scale);
    auto frac = static_cast<std::int64_t>(scaled % scale);
    if (places == 0) return fmt::format("{}", whole);
    return fmt::format("{}.{:0{}}", whole, frac, places);
}

std::string Rational::to_decimal() const {
    auto r = reduced();
    std::int64_t pow10 = 1;
    int places = 0;
    while (pow10 % r.den != 0) {
        if (places == 18) throw std::domain_error(fmt::format("{}/{} has no finite decimal form", num, den));
        pow10 *= 10;
        ++places;
    }
    auto scaled = static_cast<__int128>(r.num) * (pow10 / r.den);
    auto whole = static_cast<std::int64_t>(scaled / pow10);
    auto frac = static_cast<std::int64_t>(scaled % pow10);
    if (places == 0) return fmt::format("{}", whole);
    auto digits = fmt::format("{:0{}}", frac, places);
    return fmt::format("{}.{}", whole, digits);
}

Rational Rational::parse_decimal(std::string_view text) {
    auto fail = [&] { return std::invalid_argument(fmt::format("invalid decimal '{}'", text)); };
    if (text.empty()) throw fail();
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool dot = false;
    bool digits = false;
    int frac_digits = 0;
    for (char c : text) {
        if (c == '.') {
            if (dot) throw fail();
            dot = true;
        } else if (c >= '0' && c <= '9') {
            digits = true;
            if (num > 100'000'000'000'000) throw fail();
            num = num * 10 + (c - '0');
            if (dot) {
                if (++frac_digits > 12) throw fail();
                den *= 10;
            }
        } else {
            throw fail();
        }
    }
    if (!digits) throw fail();
    return {num, den};
}

} // namespace tdm
