#include "qwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

using cplx = std::complex<double>;

// Component indices in the shift-then-coin basis
// (psi(-Q;R), psi(-Q+1;L), psi(-Q+1;R), ..., psi(Q;L)).
long long cw_idx_left(long long n, long long Q) { return 2 * (n + Q) - 1; } // -Q < n <= Q
long long cw_idx_right(long long n, long long Q) { return n == -Q ? 0 : 2 * (n + Q); }

// Coin-then-shift basis (psi(-Q;L), psi(-Q+1;L), ..., psi(Q-1;R), psi(Q;R)).
long long wc_idx_left(long long n, long long Q) { return n == -Q ? 0 : 2 * (n + Q) - 1; }
long long wc_idx_right(long long n, long long Q) { return n == Q ? 4 * Q - 1 : 2 * (n + Q); }

} // namespace

CWMatrix build_cw_matrix(const AlphaPQ& a) {
    const long long Q = a.Q;
    const long long N = 4 * Q;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
    const double bsign = a.boundary_sign();
    const Fraction alpha = a.alpha();

    m(0, cw_idx_left(-Q + 1, Q)) = bsign;
    m(N - 1, cw_idx_right(Q - 1, Q)) = bsign;
    for (long long n = -Q + 1; n <= Q - 1; ++n) {
        CoinMatrix c = coin_matrix(coin_angle(alpha, Fraction(0), n));
        long long rL = cw_idx_left(n, Q);
        long long rR = cw_idx_right(n, Q);
        long long cL = cw_idx_left(n + 1, Q);
        long long cR = cw_idx_right(n - 1, Q);
        m(rL, cL) = c(0, 0);
        m(rL, cR) = c(0, 1);
        m(rR, cL) = c(1, 0);
        m(rR, cR) = c(1, 1);
    }
    return CWMatrix{a, Ordering::ShiftFirst, std::move(m)};
}

CWMatrix build_wc_matrix(const AlphaPQ& a) {
    const long long Q = a.Q;
    const long long N = 4 * Q;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
    const double bsign = a.boundary_sign();
    const Fraction alpha = a.alpha();

    // psi'(n;L) reads the coin at n+1; the (Q;L) component is outside the
    // cell but its coefficient cos at the reflector Q is exactly zero.
    for (long long n = -Q; n <= Q - 1; ++n) {
        long long row = wc_idx_left(n, Q);
        if (n + 1 == Q) {
            m(row, wc_idx_right(Q, Q)) = bsign;
        } else {
            CoinMatrix c = coin_matrix(coin_angle(alpha, Fraction(0), n + 1));
            m(row, wc_idx_left(n + 1, Q)) = c(0, 0);
            m(row, wc_idx_right(n + 1, Q)) = c(0, 1);
        }
    }
    for (long long n = -Q + 1; n <= Q; ++n) {
        long long row = wc_idx_right(n, Q);
        if (n - 1 == -Q) {
            m(row, wc_idx_left(-Q, Q)) = bsign;
        } else {
            CoinMatrix c = coin_matrix(coin_angle(alpha, Fraction(0), n - 1));
            m(row, wc_idx_left(n - 1, Q)) = c(1, 0);
            m(row, wc_idx_right(n - 1, Q)) = c(1, 1);
        }
    }
    return CWMatrix{a, Ordering::CoinFirst, std::move(m)};
}

Eigen::VectorXcd parity_diagonal(const AlphaPQ& a) {
    const long long N = 4 * a.Q;
    Eigen::VectorXcd d(N);
    for (long long i = 0; i < N; ++i) {
        long long site = -a.Q + (i + 1) / 2;
        d(i) = (site % 2 != 0) ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
    }
    return d;
}

double unitarity_defect(const Eigen::MatrixXcd& m) {
    const long long n = m.rows();
    std::map<std::pair<long long, long long>, cplx> gram;
    std::vector<std::pair<long long, cplx>> row_entries;
    for (long long i = 0; i < n; ++i) {
        row_entries.clear();
        for (long long j = 0; j < n; ++j) {
            if (m(i, j) != cplx(0.0, 0.0))
                row_entries.emplace_back(j, m(i, j));
        }
        for (const auto& [j, vj] : row_entries)
            for (const auto& [k, vk] : row_entries)
                gram[{j, k}] += std::conj(vj) * vk;
    }
    double worst = 0.0;
    std::vector<char> diag_seen(n, 0);
    for (const auto& [jk, v] : gram) {
        cplx expect = jk.first == jk.second ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        worst = std::max(worst, std::abs(v - expect));
        if (jk.first == jk.second)
            diag_seen[jk.first] = 1;
    }
    for (long long j = 0; j < n; ++j)
        if (!diag_seen[j])
            worst = std::max(worst, 1.0);
    return worst;
}

double SpectrumRecord::max_residual() const {
    double worst = 0.0;
    for (double r : residuals)
        worst = std::max(worst, r);
    return worst;
}

SpectrumRecord eigenpairs(const CWMatrix& cw, bool keep_vectors) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver;
    solver.compute(cw.m, true);
    if (solver.info() != Eigen::Success)
        throw computational_error("eigensolver failed to converge at alpha = " + cw.alpha.str());

    const long long N = cw.order();
    Eigen::VectorXcd vals = solver.eigenvalues();
    const Eigen::MatrixXcd& vecs = solver.eigenvectors();

    // Cell rows hold at most two nonzeros; residuals via the nonzero list
    // cost O(N) per eigenpair instead of a dense multiply.
    std::vector<std::vector<std::pair<long long, cplx>>> row_nz(N);
    for (long long i = 0; i < N; ++i)
        for (long long j = 0; j < N; ++j)
            if (cw.m(i, j) != cplx(0.0, 0.0))
                row_nz[i].emplace_back(j, cw.m(i, j));

    std::vector<long long> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](long long i, long long j) {
        return std::arg(vals(i)) < std::arg(vals(j));
    });

    SpectrumRecord rec;
    rec.alpha = cw.alpha;
    rec.eigenvalues.reserve(N);
    rec.residuals.reserve(N);
    Eigen::MatrixXcd sorted_vecs;
    if (keep_vectors)
        sorted_vecs.resize(N, N);
    for (long long k = 0; k < N; ++k) {
        long long i = order[k];
        cplx lambda = vals(i);
        auto v = vecs.col(i);
        double resid_sq = 0.0;
        for (long long r = 0; r < N; ++r) {
            cplx acc = -lambda * v(r);
            for (const auto& [j, mij] : row_nz[r])
                acc += mij * v(j);
            resid_sq += std::norm(acc);
        }
        double resid = std::sqrt(resid_sq) / v.norm();
        rec.eigenvalues.push_back(lambda);
        rec.residuals.push_back(resid);
        rec.max_unit_circle_dev = std::max(rec.max_unit_circle_dev, std::abs(std::abs(lambda) - 1.0));
        if (keep_vectors)
            sorted_vecs.col(k) = v;
    }
    rec.min_gap = std::numeric_limits<double>::infinity();
    for (long long i = 0; i < N; ++i)
        for (long long j = i + 1; j < N; ++j)
            rec.min_gap = std::min(rec.min_gap, std::abs(rec.eigenvalues[i] - rec.eigenvalues[j]));
    if (keep_vectors)
        rec.vectors = std::move(sorted_vecs);
    return rec;
}

SpectrumRecord spectrum_of(const AlphaPQ& a) { return eigenpairs(build_cw_matrix(a)); }

MatchResult match_spectra(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol) {
    if (a.size() != b.size())
        return {false, std::numeric_limits<double>::infinity(), false};
    auto by_arg = [](std::vector<cplx> v) {
        std::stable_sort(v.begin(), v.end(),
                         [](const cplx& x, const cplx& y) { return std::arg(x) < std::arg(y); });
        return v;
    };
    std::vector<cplx> sa = by_arg(a);
    std::vector<cplx> sb = by_arg(b);
    double worst = 0.0;
    for (size_t i = 0; i < sa.size(); ++i)
        worst = std::max(worst, std::abs(sa[i] - sb[i]));
    if (worst <= tol)
        return {true, worst, false};

    // Wrap-around guard: greedy nearest-neighbor matching.
    std::vector<char> used(sb.size(), 0);
    double greedy_worst = 0.0;
    for (const cplx& x : sa) {
        double best = std::numeric_limits<double>::infinity();
        size_t best_j = 0;
        for (size_t j = 0; j < sb.size(); ++j) {
            if (used[j])
                continue;
            double d = std::abs(x - sb[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        used[best_j] = 1;
        greedy_worst = std::max(greedy_worst, best);
    }
    return {greedy_worst <= tol, greedy_worst, true};
}

namespace {

std::vector<cplx> scaled(const std::vector<cplx>& v, cplx factor) {
    std::vector<cplx> out;
    out.reserve(v.size());
    for (const cplx& x : v)
        out.push_back(factor * x);
    return out;
}

std::vector<cplx> conjugated(const std::vector<cplx>& v) {
    std::vector<cplx> out;
    out.reserve(v.size());
    for (const cplx& x : v)
        out.push_back(std::conj(x));
    return out;
}

} // namespace

CheckReport verify_complement_spectrum(const SpectrumRecord& at_alpha,
                                       const SpectrumRecord& at_complement, double tol) {
    MatchResult m = match_spectra(at_alpha.eigenvalues, at_complement.eigenvalues, tol);
    return {"complement", m.ok, m.worst,
            "alpha = " + at_alpha.alpha.str() + " vs " + at_complement.alpha.str()};
}

CheckReport verify_complement_spectrum(const AlphaPQ& a, double tol) {
    return verify_complement_spectrum(spectrum_of(a), spectrum_of(a.complement()), tol);
}

CheckReport verify_conjugation_closure(const SpectrumRecord& rec, double tol) {
    MatchResult m = match_spectra(rec.eigenvalues, conjugated(rec.eigenvalues), tol);
    return {"conjugation", m.ok, m.worst, "alpha = " + rec.alpha.str()};
}

CheckReport verify_negation_closure(const SpectrumRecord& rec, double tol) {
    MatchResult m = match_spectra(rec.eigenvalues, scaled(rec.eigenvalues, cplx(-1.0, 0.0)), tol);
    return {"negation", m.ok, m.worst, "alpha = " + rec.alpha.str()};
}

CheckReport verify_simplicity(const SpectrumRecord& rec, double tol) {
    return {"simplicity", rec.min_gap > tol, rec.min_gap, "alpha = " + rec.alpha.str()};
}

CheckReport verify_quarter_eigenvalues(const SpectrumRecord& rec, double tol) {
    const cplx targets[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    double worst = 0.0;
    for (const cplx& t : targets) {
        double best = std::numeric_limits<double>::infinity();
        for (const cplx& lambda : rec.eigenvalues)
            best = std::min(best, std::abs(lambda - t));
        worst = std::max(worst, best);
    }
    return {"quarter_roots", worst <= tol, worst, "alpha = " + rec.alpha.str()};
}

CheckReport verify_half_shift_multiset(const SpectrumRecord& at_alpha,
                                       const SpectrumRecord& at_shift, double tol) {
    MatchResult m =
        match_spectra(at_shift.eigenvalues, scaled(at_alpha.eigenvalues, cplx(0.0, 1.0)), tol);
    return {"half_shift_multiset", m.ok, m.worst,
            "alpha = " + at_alpha.alpha.str() + " vs " + at_shift.alpha.str()};
}

CheckReport verify_half_shift_similarity(const AlphaPQ& a, double tol) {
    AlphaPQ shifted = a.half_shift();
    CWMatrix lhs = build_cw_matrix(shifted);
    CWMatrix rhs = build_cw_matrix(a);
    Eigen::VectorXcd d = parity_diagonal(a);
    const long long N = lhs.order();
    double worst = 0.0;
    for (long long r = 0; r < N; ++r)
        for (long long c = 0; c < N; ++c) {
            cplx expect = cplx(0.0, 1.0) * d(r) * rhs.m(r, c) / d(c);
            worst = std::max(worst, std::abs(lhs.m(r, c) - expect));
        }
    return {"half_shift_similarity", worst <= tol, worst,
            "alpha = " + a.str() + " vs " + shifted.str()};
}

HalfShiftReport verify_half_shift(const AlphaPQ& a, double tol_multiset, double tol_entry) {
    SpectrumRecord base = spectrum_of(a);
    SpectrumRecord shifted = spectrum_of(a.half_shift());
    return {verify_half_shift_multiset(base, shifted, tol_multiset),
            verify_half_shift_similarity(a, tol_entry)};
}

CheckReport verify_ordering_equivalence(const AlphaPQ& a, double tol) {
    SpectrumRecord cw = eigenpairs(build_cw_matrix(a));
    SpectrumRecord wc = eigenpairs(build_wc_matrix(a));
    MatchResult m = match_spectra(cw.eigenvalues, wc.eigenvalues, tol);
    return {"ordering", m.ok, m.worst, "alpha = " + a.str()};
}

} // namespace qwalk
