// qwalk: inhomogeneous quantum walk simulator and spectrum analyzer.
//
// Subcommands: walk, spectrum, verify, butterfly. All outputs are UTF-8 CSV
// with '#' metadata lines; reruns with equal flags are byte-identical.
// Exit codes: 0 success, 2 validation error, 3 verification failure,
// 4 computational error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "qwalk/butterfly.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/io.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_VALIDATION = 2;
constexpr int EXIT_VERIFICATION = 3;
constexpr int EXIT_COMPUTATIONAL = 4;

using qwalk::AlphaPQ;
using qwalk::Angle;
using qwalk::Fraction;

qwalk::Angle parse_angle(const std::string& text, const std::string& what) {
    if (auto f = qwalk::parse_fraction(text))
        return Angle::exact(*f);
    try {
        return Angle::approx(qwalk::parse_double(text));
    } catch (const qwalk::validation_error&) {
        throw qwalk::validation_error("malformed " + what + ": '" + text +
                                      "' (expected 'a/b', an integer, or a real)");
    }
}

// Spectral commands require alpha written literally as P/(4Q): odd P,
// gcd(P, Q) = 1, value in (0, 1). The terms are not reduced first, so e.g.
// 2/8 is rejected even though it equals 1/4.
AlphaPQ parse_spectral_alpha(const std::string& text) {
    auto terms = qwalk::parse_rational_terms(text);
    if (!terms)
        throw qwalk::validation_error("spectral commands require a rational alpha 'P/4Q', got '" +
                                      text + "'");
    auto [num, den] = *terms;
    if (den <= 0)
        throw qwalk::validation_error("alpha denominator must be positive, got " +
                                      std::to_string(den));
    if (den % 4 != 0)
        throw qwalk::validation_error("alpha = P/(4Q): denominator must be a multiple of 4, got " +
                                      std::to_string(den));
    return AlphaPQ::make(num, den / 4);
}

qwalk::Spinor parse_spinor(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 4)
        throw qwalk::validation_error("initial spinor must be 'reL,imL,reR,imR', got '" + text +
                                      "'");
    qwalk::Spinor s{std::complex<double>(qwalk::parse_double(parts[0]), qwalk::parse_double(parts[1])),
                    std::complex<double>(qwalk::parse_double(parts[2]), qwalk::parse_double(parts[3]))};
    double nrm = std::sqrt(std::norm(s[0]) + std::norm(s[1]));
    double dev = std::abs(nrm - 1.0);
    if (dev > 1e-6)
        throw qwalk::validation_error("initial spinor norm deviates by " +
                                      qwalk::format_double(dev) + " (> 1e-6); refusing to run");
    if (dev > 1e-12)
        std::cerr << "warning: initial spinor norm deviates by " << qwalk::format_double(dev)
                  << "; renormalizing\n";
    s[0] /= nrm;
    s[1] /= nrm;
    return s;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw qwalk::validation_error("cannot open output path '" + path + "'");
    out << content;
    if (!out)
        throw qwalk::computational_error("failed while writing '" + path + "'");
}

struct WalkConfig {
    std::string alpha = "1/4";
    std::vector<std::string> thetas; // empty means theta = 0
    std::string ordering = "wc";
    std::string init = "";
    std::string output = "-";
    std::string amplitudes = "";
    long long steps = 100;
    double eps = 1e-12;
};

// "dist.csv" + theta "1/12" -> "dist.theta_1_12.csv"
std::string theta_tagged_path(const std::string& path, const std::string& theta_text) {
    std::string slug = theta_text;
    for (char& ch : slug)
        if (ch == '/' || ch == '.')
            ch = '_';
    size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || path.find('/', dot) != std::string::npos)
        return path + ".theta_" + slug;
    return path.substr(0, dot) + ".theta_" + slug + path.substr(dot);
}

int run_walk(const WalkConfig& cfg) {
    std::vector<std::string> thetas = cfg.thetas.empty() ? std::vector<std::string>{"0"}
                                                         : cfg.thetas;
    const bool sweep = thetas.size() > 1;
    if (sweep && (cfg.output.empty() || cfg.output == "-"))
        throw qwalk::validation_error("a theta list needs --output FILE (one CSV per theta)");

    qwalk::Angle alpha = parse_angle(cfg.alpha, "alpha");
    qwalk::Ordering ordering;
    if (cfg.ordering == "wc")
        ordering = qwalk::Ordering::CoinFirst;
    else if (cfg.ordering == "cw")
        ordering = qwalk::Ordering::ShiftFirst;
    else
        throw qwalk::validation_error("ordering must be 'wc' or 'cw', got '" + cfg.ordering + "'");
    if (cfg.steps < 0)
        throw qwalk::validation_error("steps must be nonnegative");
    if (cfg.eps <= 0)
        throw qwalk::validation_error("support threshold must be positive");

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    qwalk::Spinor initial{std::complex<double>(inv_sqrt2, 0.0), std::complex<double>(0.0, inv_sqrt2)};
    if (!cfg.init.empty())
        initial = parse_spinor(cfg.init);

    for (const std::string& theta_text : thetas) {
        qwalk::WalkParams params;
        params.alpha = alpha;
        params.theta = parse_angle(theta_text, "theta");
        params.ordering = ordering;

        qwalk::WalkerState state = qwalk::evolve(initial, params, cfg.steps);
        qwalk::Distribution dist = qwalk::distribution(state);

        qwalk::WalkRunMeta meta;
        meta.alpha_text = params.alpha.is_exact() ? params.alpha.fraction().str()
                                                  : qwalk::format_double(params.alpha.turns());
        meta.theta_text = params.theta.is_exact() ? params.theta.fraction().str()
                                                  : qwalk::format_double(params.theta.turns());
        meta.exact = params.exact();
        meta.ordering = cfg.ordering;
        meta.steps = cfg.steps;
        meta.initial = initial;
        meta.eps = cfg.eps;
        meta.norm_deviation = std::abs(dist.total() - 1.0);
        meta.support = qwalk::support(dist, cfg.eps);
        meta.second_moment = qwalk::moment(dist, 2);

        std::string out_path = sweep ? theta_tagged_path(cfg.output, meta.theta_text) : cfg.output;
        write_output(out_path, qwalk::walk_csv(dist, meta));
        if (!cfg.amplitudes.empty()) {
            std::string amp_path =
                sweep ? theta_tagged_path(cfg.amplitudes, meta.theta_text) : cfg.amplitudes;
            write_output(amp_path, qwalk::amplitudes_csv(state, meta));
        }
        if (!(out_path.empty() || out_path == "-")) {
            std::cout << "theta = " << meta.theta_text << ": steps = " << cfg.steps
                      << ", norm_deviation = " << qwalk::format_double(meta.norm_deviation)
                      << ", support = [" << meta.support.lo << ", " << meta.support.hi
                      << "], second_moment = " << qwalk::format_double(meta.second_moment) << "\n";
            if (params.alpha.is_exact() && params.theta.is_exact()) {
                auto cell = qwalk::confinement_predict(params.alpha.fraction(),
                                                       params.theta.fraction(), 0);
                if (cell)
                    std::cout << "reflector cell around origin: [" << cell->lo << ", " << cell->hi
                              << "]\n";
                else
                    std::cout << "reflector cell around origin: unbounded\n";
            } else {
                std::cout << "approximate mode: no confinement guarantees\n";
            }
        }
    }
    return EXIT_OK;
}

struct SpectrumConfig {
    std::string alpha;
    std::string output = "-";
    double residual_tol = 1e-8;
};

int run_spectrum(const SpectrumConfig& cfg) {
    AlphaPQ a = parse_spectral_alpha(cfg.alpha);
    qwalk::SpectrumRecord rec = qwalk::spectrum_of(a);
    if (rec.max_residual() > cfg.residual_tol)
        throw qwalk::computational_error("eigenpair residual " +
                                         qwalk::format_double(rec.max_residual()) +
                                         " exceeds tolerance at alpha = " + a.str());
    write_output(cfg.output, qwalk::spectrum_csv(rec, cfg.residual_tol));
    return EXIT_OK;
}

struct VerifyConfig {
    long long qmax = 1;
    double match_tol = 1e-8;
    double gap_tol = 1e-8;
    double entry_tol = 1e-12;
    double residual_tol = 1e-8;
    double circle_tol = 1e-10;
    double unitary_tol = 1e-12;
    std::string json_path = "";
    std::string inject_fault = "";
};

struct PropertyStats {
    long long checked = 0;
    long long failed = 0;
    double worst = 0.0;
    AlphaPQ worst_at{1, 1};
    bool lower_is_better = true; // distances vs gaps

    void feed(const qwalk::CheckReport& rep, const AlphaPQ& at) {
        ++checked;
        if (!rep.pass)
            ++failed;
        bool update = checked == 1 || (lower_is_better ? rep.worst > worst : rep.worst < worst);
        if (update) {
            worst = rep.worst;
            worst_at = at;
        }
    }
};

int run_verify(const VerifyConfig& cfg) {
    std::vector<AlphaPQ> alphas = qwalk::enumerate_alphas(cfg.qmax);

    std::optional<AlphaPQ> fault;
    if (!cfg.inject_fault.empty())
        fault = parse_spectral_alpha(cfg.inject_fault);

    std::map<std::pair<long long, long long>, qwalk::SpectrumRecord> records;
    std::map<std::pair<long long, long long>, double> defects;
    for (const AlphaPQ& a : alphas) {
        qwalk::CWMatrix cell = qwalk::build_cw_matrix(a);
        defects[{a.P, a.Q}] = qwalk::unitarity_defect(cell.m);
        qwalk::SpectrumRecord rec = qwalk::eigenpairs(cell);
        if (fault && *fault == a && !rec.eigenvalues.empty())
            rec.eigenvalues[0] += 1e-3;
        records[{a.P, a.Q}] = std::move(rec);
    }

    std::map<std::string, PropertyStats> stats;
    stats["simplicity"].lower_is_better = false;
    auto check = [&](const std::string& key, const qwalk::CheckReport& rep, const AlphaPQ& at) {
        stats[key].feed(rep, at);
    };

    for (const AlphaPQ& a : alphas) {
        const qwalk::SpectrumRecord& rec = records.at({a.P, a.Q});
        AlphaPQ comp = a.complement();
        AlphaPQ shift = a.half_shift();
        check("complement",
              qwalk::verify_complement_spectrum(rec, records.at({comp.P, comp.Q}), cfg.match_tol),
              a);
        check("conjugation", qwalk::verify_conjugation_closure(rec, cfg.match_tol), a);
        check("negation", qwalk::verify_negation_closure(rec, cfg.match_tol), a);
        check("simplicity", qwalk::verify_simplicity(rec, cfg.gap_tol), a);
        check("quarter_roots", qwalk::verify_quarter_eigenvalues(rec, cfg.match_tol), a);
        check("half_shift_multiset",
              qwalk::verify_half_shift_multiset(rec, records.at({shift.P, shift.Q}), cfg.match_tol),
              a);
        check("half_shift_similarity", qwalk::verify_half_shift_similarity(a, cfg.entry_tol), a);
        check("ordering", qwalk::verify_ordering_equivalence(a, cfg.match_tol), a);
        double resid = rec.max_residual();
        check("residuals",
              {"residuals", resid <= cfg.residual_tol, resid, "alpha = " + a.str()}, a);
        check("unit_circle",
              {"unit_circle", rec.max_unit_circle_dev <= cfg.circle_tol, rec.max_unit_circle_dev,
               "alpha = " + a.str()},
              a);
        double defect = defects.at({a.P, a.Q});
        check("matrix_unitarity",
              {"matrix_unitarity", defect <= cfg.unitary_tol, defect, "alpha = " + a.str()}, a);
    }

    bool all_pass = true;
    std::cout << "symmetry verification up to Q = " << cfg.qmax << " (" << alphas.size()
              << " fractions)\n";
    std::cout << "tolerances: match " << qwalk::format_double(cfg.match_tol) << ", gap "
              << qwalk::format_double(cfg.gap_tol) << ", entry "
              << qwalk::format_double(cfg.entry_tol) << ", residual "
              << qwalk::format_double(cfg.residual_tol) << ", circle "
              << qwalk::format_double(cfg.circle_tol) << ", unitarity "
              << qwalk::format_double(cfg.unitary_tol) << "\n";
    for (const auto& [name, st] : stats) {
        all_pass = all_pass && st.failed == 0;
        std::cout << (st.failed == 0 ? "PASS " : "FAIL ") << name << ": " << st.checked
                  << " checked, " << st.failed << " failed, worst "
                  << qwalk::format_double(st.worst) << " at alpha = " << st.worst_at.str() << "\n";
    }
    std::cout << (all_pass ? "all properties hold" : "verification FAILED") << "\n";

    if (!cfg.json_path.empty()) {
        nlohmann::json j;
        j["qmax"] = cfg.qmax;
        j["fractions"] = alphas.size();
        j["tolerances"] = {{"match", cfg.match_tol},     {"gap", cfg.gap_tol},
                           {"entry", cfg.entry_tol},     {"residual", cfg.residual_tol},
                           {"unit_circle", cfg.circle_tol}, {"matrix_unitarity", cfg.unitary_tol}};
        j["pass"] = all_pass;
        for (const auto& [name, st] : stats)
            j["properties"][name] = {{"checked", st.checked},
                                     {"failed", st.failed},
                                     {"worst", st.worst},
                                     {"worst_at", st.worst_at.str()}};
        write_output(cfg.json_path, j.dump(2) + "\n");
    }
    return all_pass ? EXIT_OK : EXIT_VERIFICATION;
}

struct ButterflyConfig {
    long long qmax = 1;
    int threads = 1;
    double tol = 1e-8;
    std::string output = "-";
    std::string plot_script = "";
};

int run_butterfly(const ButterflyConfig& cfg) {
    if (cfg.threads < 1)
        throw qwalk::validation_error("threads must be >= 1");
    qwalk::ButterflyDataset ds = qwalk::sweep(cfg.qmax, cfg.threads, cfg.tol);
    long long expected = qwalk::expected_row_count(cfg.qmax);
    if (static_cast<long long>(ds.rows.size()) != expected)
        throw qwalk::computational_error("butterfly row count mismatch: got " +
                                         std::to_string(ds.rows.size()) + ", expected " +
                                         std::to_string(expected));
    write_output(cfg.output, qwalk::butterfly_csv(ds));
    if (!cfg.plot_script.empty()) {
        std::string csv_ref =
            (cfg.output.empty() || cfg.output == "-") ? "butterfly.csv" : cfg.output;
        write_output(cfg.plot_script, qwalk::butterfly_plot_script(csv_ref));
    }
    if (!(cfg.output.empty() || cfg.output == "-"))
        std::cout << "wrote " << ds.rows.size() << " rows over " << ds.fraction_count
                  << " fractions to " << cfg.output << "\n";
    return EXIT_OK;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"inhomogeneous quantum walk simulator and spectrum analyzer"};
    app.require_subcommand(1);

    WalkConfig walk_cfg;
    CLI::App* walk = app.add_subcommand("walk", "evolve a walker and emit its distribution");
    walk->add_option("--alpha", walk_cfg.alpha, "coin parameter: 'a/b' exact or real approximate");
    walk->add_option("--theta", walk_cfg.thetas,
                     "coin offset(s): 'a/b' exact or real approximate; a list sweeps theta, "
                     "writing one CSV per value");
    walk->add_option("--steps", walk_cfg.steps, "number of steps");
    walk->add_option("--ordering", walk_cfg.ordering, "'wc' (coin then shift) or 'cw'");
    walk->add_option("--init", walk_cfg.init, "initial spinor 'reL,imL,reR,imR'");
    walk->add_option("--output,-o", walk_cfg.output, "distribution CSV path ('-' for stdout)");
    walk->add_option("--amplitudes", walk_cfg.amplitudes, "also write per-site amplitude CSV");
    walk->add_option("--eps", walk_cfg.eps, "support probability threshold");

    SpectrumConfig spec_cfg;
    CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of the finite cell operator");
    spectrum->add_option("--alpha", spec_cfg.alpha, "exact rational alpha = P/(4Q)")->required();
    spectrum->add_option("--output,-o", spec_cfg.output, "CSV path ('-' for stdout)");
    spectrum->add_option("--residual-tol", spec_cfg.residual_tol, "eigenpair residual bound");

    VerifyConfig verify_cfg;
    CLI::App* verify = app.add_subcommand("verify", "check spectral symmetries for all Q <= qmax");
    verify->add_option("--qmax", verify_cfg.qmax, "largest Q")->required();
    verify->add_option("--match-tol", verify_cfg.match_tol, "multiset match tolerance");
    verify->add_option("--gap-tol", verify_cfg.gap_tol, "simplicity min-gap bound");
    verify->add_option("--entry-tol", verify_cfg.entry_tol, "entrywise similarity tolerance");
    verify->add_option("--residual-tol", verify_cfg.residual_tol, "eigenpair residual bound");
    verify->add_option("--circle-tol", verify_cfg.circle_tol, "unit-circle modulus tolerance");
    verify->add_option("--unitary-tol", verify_cfg.unitary_tol, "matrix unitarity tolerance");
    verify->add_option("--json", verify_cfg.json_path, "write machine-readable summary JSON");
    verify->add_option("--inject-eigenvalue-fault", verify_cfg.inject_fault,
                       "perturb the spectrum at this alpha (testing hook)")
        ->group("");

    ButterflyConfig fly_cfg;
    CLI::App* butterfly = app.add_subcommand("butterfly", "eigenvalue-argument dataset over alpha");
    butterfly->add_option("--qmax", fly_cfg.qmax, "largest Q")->required();
    butterfly->add_option("--threads", fly_cfg.threads, "worker threads (deterministic merge)");
    butterfly->add_option("--tol", fly_cfg.tol, "tolerance echoed into metadata");
    butterfly->add_option("--output,-o", fly_cfg.output, "CSV path ('-' for stdout)");
    butterfly->add_option("--plot-script", fly_cfg.plot_script, "write a gnuplot script");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? EXIT_OK : EXIT_VALIDATION;
    }

    try {
        if (walk->parsed())
            return run_walk(walk_cfg);
        if (spectrum->parsed())
            return run_spectrum(spec_cfg);
        if (verify->parsed())
            return run_verify(verify_cfg);
        if (butterfly->parsed())
            return run_butterfly(fly_cfg);
    } catch (const qwalk::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_VALIDATION;
    } catch (const qwalk::computational_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_COMPUTATIONAL;
    }
    return EXIT_OK;
}
