#include "qwalk/butterfly.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <thread>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace {

using cplx = std::complex<double>;

double principal_arg(const cplx& z) {
    double a = std::arg(z);
    if (a <= -std::numbers::pi)
        a = std::numbers::pi;
    return a;
}

} // namespace

std::vector<AlphaPQ> enumerate_alphas(long long qmax) {
    if (qmax < 1)
        throw validation_error("qmax must be >= 1");
    std::vector<AlphaPQ> out;
    for (long long Q = 1; Q <= qmax; ++Q)
        for (long long P = 1; P < 4 * Q; P += 2)
            if (std::gcd(P, Q) == 1)
                out.push_back(AlphaPQ{P, Q});
    return out;
}

long long expected_row_count(long long qmax) {
    long long rows = 0;
    for (const AlphaPQ& a : enumerate_alphas(qmax))
        rows += 4 * a.Q;
    return rows;
}

ButterflyDataset sweep(long long qmax, int threads, double tol) {
    std::vector<AlphaPQ> alphas = enumerate_alphas(qmax);
    const size_t count = alphas.size();

    struct PerFraction {
        std::vector<double> args;
        double max_residual = 0.0;
        double max_unit_dev = 0.0;
        double unitarity = 0.0;
    };
    std::vector<PerFraction> partial(count);

    auto run_one = [&](size_t i) {
        CWMatrix cell = build_cw_matrix(alphas[i]);
        PerFraction& p = partial[i];
        p.unitarity = unitarity_defect(cell.m);
        SpectrumRecord rec = eigenpairs(cell);
        p.max_residual = rec.max_residual();
        p.max_unit_dev = rec.max_unit_circle_dev;
        p.args.reserve(rec.eigenvalues.size());
        for (const cplx& lambda : rec.eigenvalues)
            p.args.push_back(principal_arg(lambda));
        std::sort(p.args.begin(), p.args.end());
    };

    if (threads <= 1) {
        for (size_t i = 0; i < count; ++i)
            run_one(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                        run_one(i);
                } catch (...) {
                    errors[static_cast<size_t>(t)] = std::current_exception();
                    next.store(count);
                }
            });
        }
        for (auto& th : pool)
            th.join();
        for (const auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    ButterflyDataset ds;
    ds.qmax = qmax;
    ds.tol = tol;
    ds.fraction_count = count;
    for (size_t i = 0; i < count; ++i) {
        const AlphaPQ& a = alphas[i];
        const PerFraction& p = partial[i];
        double alpha_real = static_cast<double>(a.P) / static_cast<double>(4 * a.Q);
        for (double arg : p.args)
            ds.rows.push_back({a.P, a.Q, alpha_real, arg});
        ds.max_residual = std::max(ds.max_residual, p.max_residual);
        ds.max_unit_circle_dev = std::max(ds.max_unit_circle_dev, p.max_unit_dev);
        ds.max_unitarity_defect = std::max(ds.max_unitarity_defect, p.unitarity);
    }
    return ds;
}

namespace {

using ColumnMap = std::map<std::pair<long long, long long>, std::vector<cplx>>;

ColumnMap columns_of(const ButterflyDataset& ds) {
    ColumnMap cols;
    for (const ButterflyRow& r : ds.rows)
        cols[{r.P, r.Q}].push_back(std::polar(1.0, r.arg));
    return cols;
}

void run_column_check(AuditReport& report, const std::string& name, const ColumnMap& cols,
                      double tol,
                      const std::function<std::pair<long long, long long>(long long, long long)>&
                          partner_key,
                      const std::function<cplx(const cplx&)>& transform) {
    AuditCheck check;
    check.name = name;
    check.pass = true;
    for (const auto& [key, values] : cols) {
        auto it = cols.find(partner_key(key.first, key.second));
        if (it == cols.end()) {
            check.pass = false;
            check.worst = std::numeric_limits<double>::infinity();
            check.worst_at = AlphaPQ{key.first, key.second};
            break;
        }
        std::vector<cplx> expected;
        expected.reserve(values.size());
        for (const cplx& v : values)
            expected.push_back(transform(v));
        MatchResult m = match_spectra(it->second, expected, tol);
        if (m.worst > check.worst) {
            check.worst = m.worst;
            check.worst_at = AlphaPQ{key.first, key.second};
        }
        check.pass = check.pass && m.ok;
    }
    report.pass = report.pass && check.pass;
    report.checks.push_back(std::move(check));
}

} // namespace

AuditReport symmetry_audit(const ButterflyDataset& ds, double tol) {
    ColumnMap cols = columns_of(ds);
    AuditReport report;
    report.pass = true;
    // column at 1 - alpha carries the same arguments
    run_column_check(report, "complement", cols, tol,
                     [](long long P, long long Q) { return std::make_pair(4 * Q - P, Q); },
                     [](const cplx& v) { return v; });
    // argument multiset symmetric under phi -> -phi
    run_column_check(report, "conjugation", cols, tol,
                     [](long long P, long long Q) { return std::make_pair(P, Q); },
                     [](const cplx& v) { return std::conj(v); });
    // argument multiset symmetric under phi -> phi + pi
    run_column_check(report, "negation", cols, tol,
                     [](long long P, long long Q) { return std::make_pair(P, Q); },
                     [](const cplx& v) { return -v; });
    // column at alpha + 1/2 is the column at alpha rotated by pi/2
    run_column_check(report, "half_shift", cols, tol,
                     [](long long P, long long Q) {
                         return std::make_pair((P + 2 * Q) % (4 * Q), Q);
                     },
                     [](const cplx& v) { return cplx(0.0, 1.0) * v; });
    return report;
}

} // namespace qwalk
