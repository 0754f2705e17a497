// End-to-end acceptance suite for the walk simulator and spectrum analyzer.
// Each check prints one PASS/FAIL line with its key numbers; the process
// exits nonzero if any check fails. The CLI binary path comes from argv[1]
// (falling back to the build-time default).

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "qwalk/butterfly.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/io.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

namespace fs = std::filesystem;
using namespace qwalk;
using cplx = std::complex<double>;
using clock_type = std::chrono::steady_clock;

namespace {

std::string cli_path = QWALK_CLI_PATH;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int run_cli(const std::string& args) {
    std::string cmd = cli_path + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return status < 0 ? -1 : WEXITSTATUS(status);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw computational_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_file(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "qwalk_acceptance";
    fs::create_directories(dir);
    return dir / name;
}

const Spinor DEFAULT_SPINOR{cplx(1.0 / std::numbers::sqrt2, 0.0),
                            cplx(0.0, 1.0 / std::numbers::sqrt2)};

struct Runner {
    int failures = 0;

    void check(const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
        bool ok = false;
        std::string detail;
        try {
            auto [pass, info] = fn();
            ok = pass;
            detail = info;
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!ok)
            ++failures;
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << (detail.empty() ? "" : "  [")
                  << detail << (detail.empty() ? "" : "]") << "\n"
                  << std::flush;
    }
};

std::pair<bool, std::string> small_cell_spectrum() {
    fs::path out = temp_file("spectrum_quarter.csv");
    auto t0 = clock_type::now();
    int rc = run_cli("spectrum --alpha 1/4 --output " + out.string());
    double secs = seconds_since(t0);
    if (rc != 0)
        return {false, "CLI exit code " + std::to_string(rc)};
    SpectrumRecord rec = parse_spectrum_csv(read_file(out));
    std::vector<cplx> expected = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    MatchResult m = match_spectra(rec.eigenvalues, expected, 1e-12);
    bool ok = m.ok && rec.eigenvalues.size() == 4 && secs < 1.0;
    return {ok, "worst " + format_double(m.worst) + ", " + format_double(secs) + " s"};
}

std::pair<bool, std::string> symmetry_suite_q20() {
    auto t0 = clock_type::now();
    std::vector<AlphaPQ> alphas = enumerate_alphas(20);
    std::map<std::pair<long long, long long>, SpectrumRecord> recs;
    for (const AlphaPQ& a : alphas)
        recs[{a.P, a.Q}] = eigenpairs(build_cw_matrix(a));

    bool ok = true;
    double worst_match = 0.0;
    double worst_gap = std::numeric_limits<double>::infinity();
    for (const AlphaPQ& a : alphas) {
        const SpectrumRecord& rec = recs.at({a.P, a.Q});
        AlphaPQ comp = a.complement();
        AlphaPQ shift = a.half_shift();
        CheckReport checks[] = {
            verify_complement_spectrum(rec, recs.at({comp.P, comp.Q}), 1e-8),
            verify_conjugation_closure(rec, 1e-8),
            verify_negation_closure(rec, 1e-8),
            verify_quarter_eigenvalues(rec, 1e-8),
            verify_half_shift_multiset(rec, recs.at({shift.P, shift.Q}), 1e-8),
        };
        for (const CheckReport& c : checks) {
            ok = ok && c.pass;
            worst_match = std::max(worst_match, c.worst);
        }
        CheckReport gap = verify_simplicity(rec, 1e-8);
        ok = ok && gap.pass;
        worst_gap = std::min(worst_gap, gap.worst);

        SpectrumRecord wc = eigenpairs(build_wc_matrix(a));
        MatchResult m = match_spectra(rec.eigenvalues, wc.eigenvalues, 1e-8);
        ok = ok && m.ok;
        worst_match = std::max(worst_match, m.worst);
    }
    double secs = seconds_since(t0);
    ok = ok && secs < 120.0;
    return {ok, std::to_string(alphas.size()) + " fractions, worst match " +
                    format_double(worst_match) + ", min gap " + format_double(worst_gap) + ", " +
                    format_double(secs) + " s"};
}

std::pair<bool, std::string> parity_similarity_q20() {
    double worst = 0.0;
    for (const AlphaPQ& a : enumerate_alphas(20))
        worst = std::max(worst, verify_half_shift_similarity(a, 1e-12).worst);
    return {worst <= 1e-12, "max entrywise deviation " + format_double(worst)};
}

std::pair<bool, std::string> butterfly_qmax60() {
    fs::path out = temp_file("butterfly60.csv");
    auto t0 = clock_type::now();
    int rc = run_cli("butterfly --qmax 60 --threads 1 --output " + out.string());
    double secs = seconds_since(t0);
    if (rc != 0)
        return {false, "CLI exit code " + std::to_string(rc)};
    if (secs >= 900.0)
        return {false, "single-threaded sweep took " + format_double(secs) + " s"};

    ButterflyDataset ds = parse_butterfly_csv(read_file(out));
    long long expected = expected_row_count(60);
    if (static_cast<long long>(ds.rows.size()) != expected)
        return {false, "row count " + std::to_string(ds.rows.size()) + " != " +
                           std::to_string(expected)};

    std::map<std::pair<long long, long long>, std::vector<cplx>> cols;
    for (const ButterflyRow& r : ds.rows)
        cols[{r.P, r.Q}].push_back(std::polar(1.0, r.arg));
    const cplx targets[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    double worst_root = 0.0;
    for (const auto& [key, values] : cols) {
        for (const cplx& t : targets) {
            double best = std::numeric_limits<double>::infinity();
            for (const cplx& v : values)
                best = std::min(best, std::abs(v - t));
            worst_root = std::max(worst_root, best);
        }
    }

    AuditReport audit = symmetry_audit(ds, 1e-8);
    double worst_audit = 0.0;
    for (const AuditCheck& c : audit.checks)
        worst_audit = std::max(worst_audit, c.worst);

    bool ok = worst_root <= 1e-8 && audit.pass;
    return {ok, std::to_string(ds.rows.size()) + " rows, worst quarter-root distance " +
                    format_double(worst_root) + ", worst audit " + format_double(worst_audit) +
                    ", " + format_double(secs) + " s"};
}

std::pair<bool, std::string> confinement_q12() {
    auto t0 = clock_type::now();
    bool ok = true;
    long long pairs = 0;
    std::map<std::pair<long long, long long>, SiteInterval> unions;
    for (const AlphaPQ& a : enumerate_alphas(12)) {
        ++pairs;
        WalkParams p;
        p.alpha = Angle::exact(a.alpha());
        p.theta = Angle::exact(Fraction(0));
        CoinField coins(p);
        WalkerState s(0, DEFAULT_SPINOR);
        SiteInterval span{0, 0};
        for (int t = 1; t <= 500; ++t) {
            s = step(s, coins, p.ordering);
            SiteInterval sup = support(distribution(s), 1e-12);
            span.lo = std::min(span.lo, sup.lo);
            span.hi = std::max(span.hi, sup.hi);
            if (sup.lo < -a.Q || sup.hi > a.Q)
                ok = false;
        }
        unions[{a.P, a.Q}] = span;
    }
    ok = ok && unions.at({1, 1}) == SiteInterval{-1, 1};
    ok = ok && unions.at({5, 3}) == SiteInterval{-3, 3};
    double secs = seconds_since(t0);
    ok = ok && secs < 60.0;
    return {ok, std::to_string(pairs) + " fractions, alpha=1/4 span [" +
                    std::to_string(unions.at({1, 1}).lo) + ", " +
                    std::to_string(unions.at({1, 1}).hi) + "], alpha=5/12 span [" +
                    std::to_string(unions.at({5, 3}).lo) + ", " +
                    std::to_string(unions.at({5, 3}).hi) + "], " + format_double(secs) + " s"};
}

std::pair<bool, std::string> third_alpha_regimes() {
    auto cell = confinement_predict(Fraction(1, 3), Fraction(1, 12), 0);
    if (!cell || !(*cell == SiteInterval{-1, 2}))
        return {false, "predicted cell is not [-1, 2]"};

    WalkParams confined;
    confined.alpha = Angle::exact(Fraction(1, 3));
    confined.theta = Angle::exact(Fraction(1, 12));
    CoinField coins(confined);
    WalkerState s(0, DEFAULT_SPINOR);
    bool inside = true;
    for (int t = 1; t <= 300; ++t) {
        s = step(s, coins, confined.ordering);
        if (!cell->contains(support(distribution(s), 1e-12)))
            inside = false;
    }

    WalkParams spreading;
    spreading.alpha = Angle::exact(Fraction(1, 3));
    spreading.theta = Angle::exact(Fraction(1, 6));
    if (confinement_predict(Fraction(1, 3), Fraction(1, 6), 0).has_value())
        return {false, "theta = 1/6 unexpectedly has reflectors"};
    CoinField coins2(spreading);
    WalkerState w(0, DEFAULT_SPINOR);
    std::vector<long long> widths;
    for (int t = 1; t <= 300; ++t) {
        w = step(w, coins2, spreading.ordering);
        if (t == 50 || t == 150 || t == 300)
            widths.push_back(support(distribution(w), 1e-12).width());
    }
    bool growing = widths[0] < widths[1] && widths[1] < widths[2];
    bool ok = inside && growing;
    return {ok, "confined support in [-1, 2]; spreading widths " + std::to_string(widths[0]) +
                    " < " + std::to_string(widths[1]) + " < " + std::to_string(widths[2])};
}

std::pair<bool, std::string> rescaled_moment_decay() {
    WalkParams p;
    p.alpha = Angle::exact(Fraction(1, 4));
    p.theta = Angle::exact(Fraction(0));
    CoinField coins(p);
    WalkerState s(0, DEFAULT_SPINOR);
    const double eta = 0.5;
    std::map<int, double> scaled;
    for (int t = 1; t <= 1000; ++t) {
        s = step(s, coins, p.ordering);
        if (t == 100 || t == 300 || t == 1000)
            scaled[t] = moment(distribution(s), 2) / std::pow(t, 2.0 * eta);
    }
    bool ok = scaled[100] >= scaled[300] && scaled[300] >= scaled[1000] && scaled[1000] < 1e-2;
    return {ok, "m2/t at t=100,300,1000: " + format_double(scaled[100]) + ", " +
                    format_double(scaled[300]) + ", " + format_double(scaled[1000])};
}

std::pair<bool, std::string> conservation_and_unitarity() {
    WalkParams p;
    p.alpha = Angle::exact(Fraction(1, 4));
    p.theta = Angle::exact(Fraction(0));
    WalkerState s = evolve(DEFAULT_SPINOR, p, 10000);
    double dev = std::abs(distribution(s).total() - 1.0);

    double worst_defect = 0.0;
    for (const AlphaPQ& a : enumerate_alphas(60))
        worst_defect = std::max(worst_defect, unitarity_defect(build_cw_matrix(a).m));

    bool ok = dev <= 1e-9 && worst_defect <= 1e-12;
    return {ok, "norm deviation " + format_double(dev) + " after 10^4 steps, worst cell defect " +
                    format_double(worst_defect) + " up to Q = 60"};
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1)
        cli_path = argv[1];

    Runner r;
    r.check("small-cell spectrum is exactly {1, -1, i, -i} within 1e-12 (CLI, < 1 s)",
            small_cell_spectrum);
    r.check("spectral symmetries hold for every fraction up to Q = 20 at 1e-8",
            symmetry_suite_q20);
    r.check("half-shift parity similarity entrywise within 1e-12 up to Q = 20",
            parity_similarity_q20);
    r.check("butterfly qmax = 60: row count, quarter roots, symmetry audit, runtime",
            butterfly_qmax60);
    r.check("confinement to [-Q, Q] for every fraction up to Q = 12 over 500 steps",
            confinement_q12);
    r.check("alpha = 1/3: confined at theta = 1/12, spreading at theta = 1/6",
            third_alpha_regimes);
    r.check("rescaled second moment decays for the confined quarter walk",
            rescaled_moment_decay);
    r.check("norm conserved over 10^4 steps; every cell unitary to 1e-12 up to Q = 60",
            conservation_and_unitarity);

    if (r.failures == 0) {
        std::cout << "acceptance: all checks passed\n";
        return 0;
    }
    std::cout << "acceptance: " << r.failures << " check(s) FAILED\n";
    return 1;
}
