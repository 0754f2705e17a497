#include "qwalk/walk.hpp"

#include <cmath>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

constexpr long long COIN_CACHE_LIMIT = 4096;
constexpr std::complex<double> CZERO{0.0, 0.0};

bool site_empty(const Spinor& s) { return s[0] == CZERO && s[1] == CZERO; }

} // namespace

CoinField::CoinField(const WalkParams& p) : exact_(p.exact()) {
    if (exact_) {
        alpha_ = p.alpha.fraction();
        theta_ = p.theta.fraction();
        period_ = alpha_.den();
        if (period_ <= COIN_CACHE_LIMIT) {
            cache_.reserve(period_);
            for (long long r = 0; r < period_; ++r)
                cache_.push_back(coin_matrix(coin_angle(alpha_, theta_, r)));
        }
    } else {
        alpha_d_ = p.alpha.turns();
        theta_d_ = p.theta.turns();
    }
}

CoinMatrix CoinField::at(long long n) const {
    if (!exact_)
        return coin_matrix(alpha_d_ * static_cast<double>(n) + theta_d_);
    if (!cache_.empty()) {
        long long r = n % period_;
        if (r < 0)
            r += period_;
        return cache_[static_cast<size_t>(r)];
    }
    return coin_matrix(coin_angle(alpha_, theta_, n));
}

WalkerState::WalkerState(long long origin, const Spinor& spinor)
    : nmin_(origin), amp_(1, spinor), steps_(0) {}

WalkerState::WalkerState(long long nmin, std::vector<Spinor> amplitudes, long long step_count)
    : nmin_(nmin), amp_(std::move(amplitudes)), steps_(step_count) {
    if (amp_.empty())
        throw validation_error("walker window must be nonempty");
}

const Spinor& WalkerState::at(long long n) const {
    static const Spinor zero{CZERO, CZERO};
    if (!in_window(n))
        return zero;
    return amp_[static_cast<size_t>(n - nmin_)];
}

double WalkerState::norm_squared() const {
    double acc = 0.0;
    for (const auto& s : amp_)
        acc += std::norm(s[0]) + std::norm(s[1]);
    return acc;
}

WalkerState apply_coin(const WalkerState& s, const CoinField& coins) {
    WalkerState out = s;
    long long n = out.nmin_;
    for (auto& sp : out.amp_) {
        CoinMatrix m = coins.at(n);
        std::complex<double> l = m(0, 0) * sp[0] + m(0, 1) * sp[1];
        std::complex<double> r = m(1, 0) * sp[0] + m(1, 1) * sp[1];
        sp[0] = l;
        sp[1] = r;
        ++n;
    }
    return out;
}

WalkerState apply_coin(const WalkerState& s, const WalkParams& p) {
    return apply_coin(s, CoinField(p));
}

WalkerState apply_shift(const WalkerState& s) {
    size_t old_size = s.amp_.size();
    std::vector<Spinor> next(old_size + 2, Spinor{CZERO, CZERO});
    for (size_t i = 0; i < old_size; ++i) {
        next[i][0] = s.amp_[i][0];      // L moves one site left
        next[i + 2][1] = s.amp_[i][1];  // R moves one site right
    }
    long long nmin = s.nmin_ - 1;
    // Trim exact-zero edges; reflectors produce exact zeros, so a confined
    // walk keeps a bounded window.
    size_t lo = 0, hi = next.size();
    while (lo + 1 < hi && site_empty(next[lo]))
        ++lo;
    while (hi > lo + 1 && site_empty(next[hi - 1]))
        --hi;
    if (lo > 0 || hi < next.size()) {
        next = std::vector<Spinor>(next.begin() + lo, next.begin() + hi);
        nmin += static_cast<long long>(lo);
    }
    return WalkerState(nmin, std::move(next), s.steps_);
}

WalkerState step(const WalkerState& s, const CoinField& coins, Ordering ordering) {
    WalkerState out = ordering == Ordering::CoinFirst ? apply_shift(apply_coin(s, coins))
                                                      : apply_coin(apply_shift(s), coins);
    out.steps_ = s.steps_ + 1;
    return out;
}

WalkerState step(const WalkerState& s, const WalkParams& p) {
    return step(s, CoinField(p), p.ordering);
}

WalkerState evolve(const Spinor& initial, const WalkParams& p, long long t) {
    if (t < 0)
        throw validation_error("step count must be nonnegative, got " + std::to_string(t));
    double nrm = std::norm(initial[0]) + std::norm(initial[1]);
    if (std::abs(nrm - 1.0) > 1e-9)
        throw validation_error("initial spinor must be normalized");
    CoinField coins(p);
    WalkerState s(0, initial);
    for (long long i = 0; i < t; ++i)
        s = step(s, coins, p.ordering);
    return s;
}

double Distribution::at(long long n) const {
    if (n < nmin || n > nmax())
        return 0.0;
    return prob[static_cast<size_t>(n - nmin)];
}

double Distribution::total() const {
    double acc = 0.0;
    for (double p : prob)
        acc += p;
    return acc;
}

Distribution distribution(const WalkerState& s) {
    Distribution d;
    d.nmin = s.nmin();
    d.step = s.step_count();
    d.prob.reserve(s.window_size());
    for (long long n = s.nmin(); n <= s.nmax(); ++n) {
        const Spinor& sp = s.at(n);
        d.prob.push_back(std::norm(sp[0]) + std::norm(sp[1]));
    }
    return d;
}

double moment(const Distribution& d, int k) {
    if (k < 1)
        throw validation_error("moment order must be >= 1");
    double acc = 0.0;
    long long n = d.nmin;
    for (double p : d.prob) {
        double nk = 1.0;
        for (int i = 0; i < k; ++i)
            nk *= static_cast<double>(n);
        acc += nk * p;
        ++n;
    }
    return acc;
}

SiteInterval support(const Distribution& d, double eps) {
    if (eps <= 0.0)
        throw validation_error("support threshold must be positive");
    long long lo = 0, hi = 0;
    bool found = false;
    long long n = d.nmin;
    for (double p : d.prob) {
        if (p > eps) {
            if (!found)
                lo = n;
            hi = n;
            found = true;
        }
        ++n;
    }
    if (!found)
        throw computational_error("distribution has no site above the support threshold");
    return SiteInterval{lo, hi};
}

namespace {

bool is_reflector(const Fraction& alpha, const Fraction& theta, long long n) {
    Fraction r = coin_angle(alpha, theta, n);
    return r == Fraction(1, 4) || r == Fraction(3, 4);
}

} // namespace

std::optional<SiteInterval> confinement_predict(const Fraction& alpha, const Fraction& theta,
                                                long long origin) {
    // The coin angle repeats with period den(alpha) in n, so scanning one
    // period per side decides existence.
    long long period = alpha.den();
    constexpr long long SCAN_LIMIT = 2'000'000;
    if (period > SCAN_LIMIT)
        throw computational_error("alpha denominator too large for reflector scan");
    std::optional<long long> lo, hi;
    for (long long k = 0; k < period; ++k) {
        if (!lo && is_reflector(alpha, theta, origin - k))
            lo = origin - k;
        if (!hi && is_reflector(alpha, theta, origin + k))
            hi = origin + k;
        if (lo && hi)
            break;
    }
    if (!lo || !hi)
        return std::nullopt;
    return SiteInterval{*lo, *hi};
}

} // namespace qwalk
