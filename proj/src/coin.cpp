#include "qwalk/coin.hpp"

#include <cmath>

namespace qwalk {

namespace {

constexpr double TWO_PI = 6.283185307179586476925286766559;

CoinMatrix rotation_from_quadrant(int quarter_turns, double c0, double s0) {
    // (c, s) = R(k * 90deg) applied to (c0, s0), with exact signs.
    double c, s;
    switch (quarter_turns & 3) {
    case 0: c = c0;  s = s0;  break;
    case 1: c = -s0; s = c0;  break;
    case 2: c = -c0; s = -s0; break;
    default: c = s0; s = -c0; break;
    }
    CoinMatrix m;
    m << std::complex<double>(c, 0.0), std::complex<double>(-s, 0.0),
         std::complex<double>(s, 0.0), std::complex<double>(c, 0.0);
    return m;
}

} // namespace

Fraction coin_angle(const Fraction& alpha, const Fraction& theta, long long n) {
    return (alpha * n + theta).mod1();
}

CoinMatrix coin_matrix(const Fraction& r) {
    Fraction turn = r.mod1();
    // turn = k/4 + remainder, remainder in [0, 1/4)
    long long k = 4 * turn.num() / turn.den();
    Fraction remainder = turn - Fraction(k, 4);
    double c0, s0;
    if (remainder.is_zero()) {
        c0 = 1.0;
        s0 = 0.0;
    } else {
        double x = TWO_PI * remainder.to_double();
        c0 = std::cos(x);
        s0 = std::sin(x);
    }
    return rotation_from_quadrant(static_cast<int>(k), c0, s0);
}

CoinMatrix coin_matrix(double r) {
    double turn = r - std::floor(r);
    int k = static_cast<int>(std::floor(4.0 * turn));
    double remainder = turn - 0.25 * k;
    double x = TWO_PI * remainder;
    return rotation_from_quadrant(k, std::cos(x), std::sin(x));
}

CoinMatrix GeneralCoin::matrix() const {
    CoinMatrix m;
    m << a, b, c, d;
    return m;
}

std::string CoinValidationReport::summary() const {
    if (ok)
        return "ok";
    std::string s;
    for (const auto& con : constraints) {
        if (con.ok)
            continue;
        if (!s.empty())
            s += "; ";
        s += con.name + " (residual " + std::to_string(con.residual) + ")";
    }
    return "violated: " + s;
}

CoinValidationReport validate_general_coin(const GeneralCoin& g, double tol) {
    std::complex<double> det = g.a * g.d - g.b * g.c;
    CoinValidationReport rep;
    auto add = [&](const std::string& name, double residual) {
        rep.constraints.push_back({name, residual, residual <= tol});
    };
    add("|a|^2 + |c|^2 = 1", std::abs(std::norm(g.a) + std::norm(g.c) - 1.0));
    add("a*conj(b) + c*conj(d) = 0", std::abs(g.a * std::conj(g.b) + g.c * std::conj(g.d)));
    add("c = -det*conj(b)", std::abs(g.c + det * std::conj(g.b)));
    add("d = det*conj(a)", std::abs(g.d - det * std::conj(g.a)));
    add("|det| = 1", std::abs(std::abs(det) - 1.0));
    rep.ok = true;
    for (const auto& con : rep.constraints)
        rep.ok = rep.ok && con.ok;
    return rep;
}

} // namespace qwalk
