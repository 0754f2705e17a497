#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qwalk/fraction.hpp"

namespace qwalk {

/// 2x2 complex coin acting on the internal (L, R) degree of freedom.
/// Row/column order is (L, R).
using CoinMatrix = Eigen::Matrix2cd;

/// Coin angle in turns at site n: r = (alpha * n + theta) mod 1.
/// The physical rotation angle is 2*pi*r.
Fraction coin_angle(const Fraction& alpha, const Fraction& theta, long long n);

/// Rotation coin [[cos 2πr, -sin 2πr], [sin 2πr, cos 2πr]].
///
/// The angle is decomposed as r = k/4 + r0 with r0 in [0, 1/4); the cosine
/// and sine of the remainder are rotated into place by an exact quarter-turn
/// permutation. Quarter-fraction angles therefore produce exact {0, +/-1}
/// entries, and shifting r by 1/2 negates the matrix bit-for-bit.
CoinMatrix coin_matrix(const Fraction& r);

/// Floating-angle variant for approximate (irrational-parameter) runs.
/// r is in turns; no exactness guarantees.
CoinMatrix coin_matrix(double r);

/// Per-site coefficients of a general position-dependent coin,
/// [[a, b], [c, d]] in the (L, R) basis.
struct GeneralCoin {
    std::complex<double> a, b, c, d;

    CoinMatrix matrix() const;
};

/// One constraint relation of the general coin, with its residual.
struct CoinConstraint {
    std::string name;
    double residual;
    bool ok;
};

struct CoinValidationReport {
    bool ok;
    std::vector<CoinConstraint> constraints;

    std::string summary() const;
};

/// Checks the five unitarity relations of the general coin coefficients:
/// |a|^2 + |c|^2 = 1, a*conj(b) + c*conj(d) = 0, c = -D*conj(b),
/// d = D*conj(a), |D| = 1 with D = ad - bc. Violations are reported with
/// their residuals rather than thrown.
CoinValidationReport validate_general_coin(const GeneralCoin& g, double tol = 1e-12);

} // namespace qwalk
