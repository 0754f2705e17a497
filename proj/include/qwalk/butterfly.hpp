#pragma once

#include <string>
#include <vector>

#include "qwalk/fraction.hpp"
#include "qwalk/spectral.hpp"

namespace qwalk {

/// All admissible pairs (P, Q) with 1 <= Q <= qmax, ascending by (Q, P).
/// Admissibility makes each value's representation unique, so there is
/// nothing to deduplicate.
std::vector<AlphaPQ> enumerate_alphas(long long qmax);

/// Number of rows a sweep up to qmax must produce: sum of 4Q over the
/// enumerated pairs.
long long expected_row_count(long long qmax);

struct ButterflyRow {
    long long P;
    long long Q;
    double alpha; // P/(4Q) as a real in (0, 1)
    double arg;   // eigenvalue argument in (-pi, pi]

    bool operator==(const ButterflyRow&) const = default;
};

/// Flattened eigenvalue-argument dataset over all admissible fractions.
/// Rows are grouped per (P, Q) in enumeration order and argument-ascending
/// within a group; two sweeps with equal parameters are bit-identical.
struct ButterflyDataset {
    long long qmax = 0;
    double tol = 1e-8;
    size_t fraction_count = 0;
    std::vector<ButterflyRow> rows;
    double max_residual = 0.0;
    double max_unit_circle_dev = 0.0;
    double max_unitarity_defect = 0.0;
};

/// Computes the spectrum of every admissible fraction up to qmax. Work may
/// fan out over `threads` workers; results merge in enumeration order, so
/// the dataset does not depend on scheduling. Solver failures propagate with
/// the offending (P, Q) attached and no partial dataset is returned.
ButterflyDataset sweep(long long qmax, int threads = 1, double tol = 1e-8);

struct AuditCheck {
    std::string name;
    bool pass = false;
    double worst = 0.0;
    AlphaPQ worst_at{1, 1};
};

struct AuditReport {
    std::vector<AuditCheck> checks;
    bool pass = true;
};

/// Dataset-level symmetry audit: per-column closure under conjugation and
/// negation, column identity between alpha and 1 - alpha, and the quarter
/// rotation between alpha and alpha + 1/2.
AuditReport symmetry_audit(const ButterflyDataset& ds, double tol = 1e-8);

} // namespace qwalk
