#include "qwalk/fraction.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <numeric>

namespace qwalk {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 uabs(i128 v) { return v < 0 ? u128(-v) : u128(v); }

u128 gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

constexpr i128 I64_MAX = std::numeric_limits<long long>::max();

} // namespace

Fraction Fraction::normalized(i128 n, i128 d) {
    if (d == 0)
        throw validation_error("fraction denominator must be nonzero");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    if (n == 0)
        return Fraction();
    u128 g = gcd_u128(uabs(n), u128(d));
    n /= i128(g);
    d /= i128(g);
    if (n > I64_MAX || n < -I64_MAX || d > I64_MAX)
        throw computational_error("fraction overflow: reduced value exceeds 64 bits");
    Fraction f;
    f.num_ = static_cast<long long>(n);
    f.den_ = static_cast<long long>(d);
    return f;
}

Fraction::Fraction(long long n, long long d) { *this = normalized(n, d); }

Fraction Fraction::mod1() const {
    long long r = num_ % den_;
    if (r < 0)
        r += den_;
    return normalized(r, den_);
}

Fraction Fraction::operator-() const { return normalized(-i128(num_), den_); }

Fraction Fraction::operator+(const Fraction& rhs) const {
    return normalized(i128(num_) * rhs.den_ + i128(rhs.num_) * den_, i128(den_) * rhs.den_);
}

Fraction Fraction::operator-(const Fraction& rhs) const {
    return normalized(i128(num_) * rhs.den_ - i128(rhs.num_) * den_, i128(den_) * rhs.den_);
}

Fraction Fraction::operator*(const Fraction& rhs) const {
    return normalized(i128(num_) * rhs.num_, i128(den_) * rhs.den_);
}

Fraction Fraction::operator*(long long rhs) const {
    return normalized(i128(num_) * rhs, den_);
}

std::strong_ordering Fraction::operator<=>(const Fraction& rhs) const {
    i128 lhs_cross = i128(num_) * rhs.den_;
    i128 rhs_cross = i128(rhs.num_) * den_;
    if (lhs_cross < rhs_cross)
        return std::strong_ordering::less;
    if (lhs_cross > rhs_cross)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Fraction::str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1)
        s += "/" + std::to_string(den_);
    return s;
}

namespace {

bool parse_ll(const char* first, const char* last, long long& out) {
    if (first == last)
        return false;
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

} // namespace

std::optional<std::pair<long long, long long>> parse_rational_terms(const std::string& text) {
    size_t b = text.find_first_not_of(" \t");
    size_t e = text.find_last_not_of(" \t");
    if (b == std::string::npos)
        return std::nullopt;
    std::string s = text.substr(b, e - b + 1);
    size_t slash = s.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == s.size())
        return std::nullopt;
    long long num = 0, den = 0;
    if (!parse_ll(s.data(), s.data() + slash, num))
        return std::nullopt;
    if (!parse_ll(s.data() + slash + 1, s.data() + s.size(), den))
        return std::nullopt;
    return std::make_pair(num, den);
}

std::optional<Fraction> parse_fraction(const std::string& text) {
    if (auto terms = parse_rational_terms(text)) {
        if (terms->second == 0)
            throw validation_error("fraction denominator must be nonzero: '" + text + "'");
        return Fraction(terms->first, terms->second);
    }
    size_t b = text.find_first_not_of(" \t");
    size_t e = text.find_last_not_of(" \t");
    if (b == std::string::npos)
        return std::nullopt;
    std::string s = text.substr(b, e - b + 1);
    long long v = 0;
    if (!parse_ll(s.data(), s.data() + s.size(), v))
        return std::nullopt;
    return Fraction(v);
}

AlphaPQ AlphaPQ::make(long long P, long long Q) {
    if (Q < 1)
        throw validation_error("alpha = P/(4Q): Q must be a positive integer, got Q = " + std::to_string(Q));
    if (P % 2 == 0)
        throw validation_error("alpha = P/(4Q): P must be odd, got P = " + std::to_string(P));
    if (P <= 0 || P >= 4 * Q)
        throw validation_error("alpha = P/(4Q) must lie in (0, 1), got " + std::to_string(P) + "/" +
                               std::to_string(4 * Q));
    if (std::gcd(P, Q) != 1)
        throw validation_error("alpha = P/(4Q): P and Q must be coprime, got P = " + std::to_string(P) +
                               ", Q = " + std::to_string(Q));
    return AlphaPQ{P, Q};
}

std::optional<AlphaPQ> AlphaPQ::from_fraction(const Fraction& f) {
    if (f <= Fraction(0) || f >= Fraction(1))
        return std::nullopt;
    if (f.den() % 4 != 0)
        return std::nullopt;
    // Reduced fraction with denominator 4Q forces the numerator odd and
    // coprime to Q, so this cannot throw.
    return make(f.num(), f.den() / 4);
}

AlphaPQ AlphaPQ::complement() const { return AlphaPQ{4 * Q - P, Q}; }

AlphaPQ AlphaPQ::half_shift() const {
    long long shifted = P + 2 * Q;
    if (shifted >= 4 * Q)
        shifted -= 4 * Q;
    return AlphaPQ{shifted, Q};
}

std::string AlphaPQ::str() const { return std::to_string(P) + "/" + std::to_string(4 * Q); }

} // namespace qwalk
