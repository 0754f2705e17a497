#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/fraction.hpp"

namespace qwalk {

/// Coin/shift application order for one step. CoinFirst is the U = WC
/// convention (coin, then conditional shift); ShiftFirst is CW.
enum class Ordering { CoinFirst, ShiftFirst };

/// Walk parameter that is either an exact fraction of a turn or a plain
/// double. Exact angles enable confinement predictions and exact reflector
/// zeros; floating angles mark the run approximate.
class Angle {
public:
    static Angle exact(const Fraction& f) { return Angle(f); }
    static Angle approx(double v) { return Angle(v); }

    bool is_exact() const { return exact_.has_value(); }
    const Fraction& fraction() const { return *exact_; }
    double turns() const { return exact_ ? exact_->to_double() : value_; }

private:
    explicit Angle(const Fraction& f) : exact_(f), value_(f.to_double()) {}
    explicit Angle(double v) : value_(v) {}

    std::optional<Fraction> exact_;
    double value_ = 0.0;
};

struct WalkParams {
    Angle alpha = Angle::exact(Fraction(1, 4));
    Angle theta = Angle::exact(Fraction(0));
    Ordering ordering = Ordering::CoinFirst;

    bool exact() const { return alpha.is_exact() && theta.is_exact(); }
};

/// Site-indexed coin lookup for fixed parameters. Exact rational angles with
/// a small denominator are cached over one period of the coin sequence.
class CoinField {
public:
    explicit CoinField(const WalkParams& p);

    CoinMatrix at(long long n) const;

private:
    bool exact_;
    Fraction alpha_, theta_;
    double alpha_d_ = 0.0, theta_d_ = 0.0;
    long long period_ = 0;
    std::vector<CoinMatrix> cache_;
};

using Spinor = std::array<std::complex<double>, 2>;

/// Walker amplitudes over a finite window of sites. Index 0 of each spinor
/// is the L component, index 1 the R component; amplitudes outside the
/// window are identically zero.
class WalkerState {
public:
    /// Point walker at `origin` with the given internal spinor.
    WalkerState(long long origin, const Spinor& spinor);

    /// Arbitrary window state (used by tests and the ordering identity).
    WalkerState(long long nmin, std::vector<Spinor> amplitudes, long long step_count = 0);

    long long nmin() const { return nmin_; }
    long long nmax() const { return nmin_ + static_cast<long long>(amp_.size()) - 1; }
    long long step_count() const { return steps_; }
    size_t window_size() const { return amp_.size(); }

    const Spinor& at(long long n) const;
    bool in_window(long long n) const { return n >= nmin() && n <= nmax(); }

    double norm_squared() const;

    friend WalkerState apply_coin(const WalkerState&, const CoinField&);
    friend WalkerState apply_shift(const WalkerState&);
    friend WalkerState step(const WalkerState&, const CoinField&, Ordering);

private:
    long long nmin_;
    std::vector<Spinor> amp_;
    long long steps_;
};

/// Per-site probabilities at a fixed step.
struct Distribution {
    long long nmin = 0;
    std::vector<double> prob;
    long long step = 0;

    long long nmax() const { return nmin + static_cast<long long>(prob.size()) - 1; }
    double at(long long n) const;
    double total() const;
};

struct SiteInterval {
    long long lo;
    long long hi;

    bool contains(const SiteInterval& inner) const { return lo <= inner.lo && inner.hi <= hi; }
    long long width() const { return hi - lo; }
    bool operator==(const SiteInterval&) const = default;
};

WalkerState apply_coin(const WalkerState& s, const CoinField& coins);
WalkerState apply_coin(const WalkerState& s, const WalkParams& p);

/// Moves every L amplitude one site left and every R amplitude one site
/// right; exact-zero edges are trimmed so confined walks keep a fixed window.
WalkerState apply_shift(const WalkerState& s);

WalkerState step(const WalkerState& s, const CoinField& coins, Ordering ordering);
WalkerState step(const WalkerState& s, const WalkParams& p);

/// t-fold step from a point walker at the origin. Throws validation_error on
/// negative t or a non-normalized spinor.
WalkerState evolve(const Spinor& initial, const WalkParams& p, long long t);

Distribution distribution(const WalkerState& s);

/// Sum of n^k * Pr(n); k >= 1.
double moment(const Distribution& d, int k);

/// Smallest interval containing every site with Pr(n) > eps.
SiteInterval support(const Distribution& d, double eps = 1e-12);

/// Interval between the nearest sites m- <= origin <= m+ whose coin angle is
/// 1/4 or 3/4 of a turn (vanishing diagonal, pure reflector). Returns nullopt
/// when no reflector exists on one side; exact rational parameters only.
std::optional<SiteInterval> confinement_predict(const Fraction& alpha, const Fraction& theta,
                                                long long origin);

} // namespace qwalk
