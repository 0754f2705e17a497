#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include "qwalk/errors.hpp"

namespace qwalk {

/// Exact rational number with canonical representation: the denominator is
/// always positive, numerator and denominator are coprime, and zero is 0/1.
/// Equal rationals therefore compare equal member-wise.
///
/// Arithmetic runs through 128-bit intermediates and throws
/// computational_error if a reduced result no longer fits in 64 bits.
/// Angles are handled as fractions of a full turn, so reflection points
/// (cosine exactly zero) stay exact instead of drifting through radians.
class Fraction {
public:
    constexpr Fraction() : num_(0), den_(1) {}
    Fraction(long long n) : num_(n), den_(1) {}
    Fraction(long long n, long long d);

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    /// Representative in [0, 1): f - floor(f).
    Fraction mod1() const;

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Fraction operator-() const;
    Fraction operator+(const Fraction& rhs) const;
    Fraction operator-(const Fraction& rhs) const;
    Fraction operator*(const Fraction& rhs) const;
    Fraction operator*(long long rhs) const;

    bool operator==(const Fraction& rhs) const { return num_ == rhs.num_ && den_ == rhs.den_; }
    std::strong_ordering operator<=>(const Fraction& rhs) const;

    std::string str() const;

private:
    static Fraction normalized(__int128 n, __int128 d);

    long long num_;
    long long den_;
};

inline Fraction operator*(long long lhs, const Fraction& rhs) { return rhs * lhs; }

/// Parses "a/b" or a bare integer into an exact fraction. Returns nullopt if
/// the string is not of that shape; throws validation_error on a zero
/// denominator.
std::optional<Fraction> parse_fraction(const std::string& text);

/// Parses "a/b" without reducing, exposing the literal terms.
std::optional<std::pair<long long, long long>> parse_rational_terms(const std::string& text);

/// Admissible coin parameter alpha = P/(4Q): P odd, Q >= 1, gcd(P, Q) = 1,
/// 0 < P < 4Q. Such fractions are automatically in lowest terms, so the pair
/// (P, Q) is the unique representation of its value.
struct AlphaPQ {
    long long P;
    long long Q;

    /// Validates and constructs; throws validation_error naming the first
    /// violated condition.
    static AlphaPQ make(long long P, long long Q);

    /// Recognizes a canonical fraction as P/(4Q); nullopt when the reduced
    /// denominator is not a multiple of 4 or the value is outside (0, 1).
    static std::optional<AlphaPQ> from_fraction(const Fraction& f);

    Fraction alpha() const { return Fraction(P, 4 * Q); }

    /// The admissible pair for 1 - alpha, i.e. (4Q - P, Q).
    AlphaPQ complement() const;

    /// The admissible pair for alpha + 1/2, canonicalized mod 1:
    /// ((P + 2Q) mod 4Q, Q). The coin field and boundary factor are
    /// unchanged by the mod-1 wrap.
    AlphaPQ half_shift() const;

    /// Boundary reflection factor (-1)^((P+1)/2) of the finite cell.
    int boundary_sign() const { return ((P + 1) / 2) % 2 != 0 ? -1 : 1; }

    bool operator==(const AlphaPQ&) const = default;
    auto operator<=>(const AlphaPQ&) const = default;

    std::string str() const;
};

} // namespace qwalk
