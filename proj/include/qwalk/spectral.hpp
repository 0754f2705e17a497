#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/fraction.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// One-step evolution operator restricted to the cell between the reflection
/// sites -Q and Q, a unitary of order 4Q. Entries are cosines/sines of exact
/// rational angles; quarter-angle entries are exact 0 / +-1.
///
/// For the shift-then-coin order the component basis is
/// (psi(-Q;R), psi(-Q+1;L), psi(-Q+1;R), ..., psi(Q;L)); for coin-then-shift
/// it is (psi(-Q;L), psi(-Q+1;L), psi(-Q+1;R), ..., psi(Q;R)). Either way
/// component i lives at site -Q + (i+1)/2.
struct CWMatrix {
    AlphaPQ alpha;
    Ordering ordering;
    Eigen::MatrixXcd m;

    long long order() const { return m.rows(); }
    long long site_of(long long idx) const { return -alpha.Q + (idx + 1) / 2; }
};

/// Cell operator for the shift-then-coin (CW) dynamics: boundary rows carry
/// the factor (-1)^((P+1)/2), interior rows apply the site coin to
/// (psi(n+1;L), psi(n-1;R)).
CWMatrix build_cw_matrix(const AlphaPQ& a);

/// Cell operator for the coin-then-shift (WC) dynamics on the same cell.
CWMatrix build_wc_matrix(const AlphaPQ& a);

/// Diagonal phase operator with entry i on components at odd sites and 1 on
/// even sites; D^4 = identity.
Eigen::VectorXcd parity_diagonal(const AlphaPQ& a);

/// max |(M^dagger M - I)_jk|, accumulated over the nonzero entries of M.
double unitarity_defect(const Eigen::MatrixXcd& m);

struct SpectrumRecord {
    AlphaPQ alpha;
    std::vector<std::complex<double>> eigenvalues; // ascending principal argument
    std::vector<double> residuals;                 // ||M v - lambda v|| per unit eigenvector
    double min_gap = 0.0;                          // min pairwise eigenvalue distance
    double max_unit_circle_dev = 0.0;              // max | |lambda| - 1 |
    std::optional<Eigen::MatrixXcd> vectors;       // columns aligned with eigenvalues

    double max_residual() const;
};

/// Dense complex eigendecomposition with mandatory residual verification.
/// Throws computational_error (naming alpha) if the solver does not converge.
SpectrumRecord eigenpairs(const CWMatrix& m, bool keep_vectors = false);

/// Convenience: build_cw_matrix + eigenpairs.
SpectrumRecord spectrum_of(const AlphaPQ& a);

/// Multiset comparison of two eigenvalue lists: sort by principal argument
/// and pair index-wise; fall back to greedy nearest-neighbor matching when a
/// paired distance exceeds the tolerance (argument wrap-around guard).
struct MatchResult {
    bool ok;
    double worst;
    bool used_fallback;
};

MatchResult match_spectra(const std::vector<std::complex<double>>& a,
                          const std::vector<std::complex<double>>& b, double tol);

struct CheckReport {
    std::string name;
    bool pass = false;
    double worst = 0.0; // worst distance / residual, or min gap for simplicity
    std::string detail;
};

/// Spectrum at alpha equals the spectrum at 1 - alpha.
CheckReport verify_complement_spectrum(const SpectrumRecord& at_alpha,
                                       const SpectrumRecord& at_complement, double tol = 1e-8);
CheckReport verify_complement_spectrum(const AlphaPQ& a, double tol = 1e-8);

/// Eigenvalue multiset is closed under complex conjugation.
CheckReport verify_conjugation_closure(const SpectrumRecord& rec, double tol = 1e-8);

/// Eigenvalue multiset is closed under negation.
CheckReport verify_negation_closure(const SpectrumRecord& rec, double tol = 1e-8);

/// All 4Q eigenvalues are simple: min pairwise gap above tol.
CheckReport verify_simplicity(const SpectrumRecord& rec, double tol = 1e-8);

/// The four eigenvalues 1, -1, i, -i are present.
CheckReport verify_quarter_eigenvalues(const SpectrumRecord& rec, double tol = 1e-8);

/// spectrum(alpha + 1/2) = i * spectrum(alpha) as multisets.
CheckReport verify_half_shift_multiset(const SpectrumRecord& at_alpha,
                                       const SpectrumRecord& at_shift, double tol = 1e-8);

/// Structural form of the half-shift rotation: CW(alpha + 1/2) equals
/// i * D * CW(alpha) * D^-1 entrywise, with D the parity diagonal.
CheckReport verify_half_shift_similarity(const AlphaPQ& a, double tol = 1e-12);

struct HalfShiftReport {
    CheckReport multiset;
    CheckReport similarity;
    bool pass() const { return multiset.pass && similarity.pass; }
};

HalfShiftReport verify_half_shift(const AlphaPQ& a, double tol_multiset = 1e-8,
                                  double tol_entry = 1e-12);

/// Spectra of the coin-then-shift and shift-then-coin cell operators agree.
CheckReport verify_ordering_equivalence(const AlphaPQ& a, double tol = 1e-8);

} // namespace qwalk
