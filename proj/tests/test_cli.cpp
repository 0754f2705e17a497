#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "qwalk/io.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

namespace fs = std::filesystem;
using cplx = std::complex<double>;

namespace {

struct CliResult {
    int exit_code;
    std::string output; // stdout + stderr
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(QWALK_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0)
        out.append(buf, got);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

fs::path temp_file(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "qwalk_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("walk with zero steps emits a single unit row") {
    CliResult r = run_cli("walk --alpha 1/4 --theta 0 --steps 0");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("# steps = 0") != std::string::npos);
    CHECK(r.output.find("# mode = exact") != std::string::npos);
    qwalk::Distribution d = qwalk::parse_walk_csv(r.output);
    REQUIRE(d.prob.size() == 1);
    CHECK(d.nmin == 0);
    CHECK(std::abs(d.prob[0] - 1.0) < 1e-12);
}

TEST_CASE("walk distribution CSV round-trips against the library") {
    fs::path out = temp_file("walk_roundtrip.csv");
    CliResult r = run_cli("walk --alpha 1/12 --theta 1/12 --steps 37 --output " + out.string());
    REQUIRE(r.exit_code == 0);
    qwalk::Distribution parsed = qwalk::parse_walk_csv(read_file(out));

    qwalk::WalkParams p;
    p.alpha = qwalk::Angle::exact(qwalk::Fraction(1, 12));
    p.theta = qwalk::Angle::exact(qwalk::Fraction(1, 12));
    const double s = 1.0 / std::sqrt(2.0);
    qwalk::Distribution direct =
        qwalk::distribution(qwalk::evolve({cplx(s, 0.0), cplx(0.0, s)}, p, 37));

    CHECK(parsed.step == direct.step);
    CHECK(parsed.nmin == direct.nmin);
    REQUIRE(parsed.prob.size() == direct.prob.size());
    for (size_t i = 0; i < parsed.prob.size(); ++i)
        CHECK(parsed.prob[i] == direct.prob[i]); // bit-exact via %.17g
}

TEST_CASE("walk summary reports the confined support") {
    fs::path out = temp_file("walk_confined.csv");
    CliResult r = run_cli("walk --alpha 1/4 --theta 0 --steps 999 --output " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("support = [-1, 1]") != std::string::npos);
    CHECK(r.output.find("reflector cell around origin: [-1, 1]") != std::string::npos);
}

TEST_CASE("walk amplitude CSV round-trips") {
    fs::path out = temp_file("walk_amp_dist.csv");
    fs::path amp = temp_file("walk_amp.csv");
    CliResult r = run_cli("walk --alpha 1/12 --steps 9 --output " + out.string() +
                          " --amplitudes " + amp.string());
    CHECK(r.exit_code == 0);

    qwalk::WalkerState parsed = qwalk::parse_amplitudes_csv(read_file(amp));
    qwalk::WalkParams p;
    p.alpha = qwalk::Angle::exact(qwalk::Fraction(1, 12));
    p.theta = qwalk::Angle::exact(qwalk::Fraction(0));
    const double s = 1.0 / std::sqrt(2.0);
    qwalk::WalkerState direct = qwalk::evolve({cplx(s, 0.0), cplx(0.0, s)}, p, 9);
    CHECK(parsed.step_count() == direct.step_count());
    CHECK(parsed.nmin() == direct.nmin());
    REQUIRE(parsed.window_size() == direct.window_size());
    for (long long n = direct.nmin(); n <= direct.nmax(); ++n) {
        CHECK(parsed.at(n)[0] == direct.at(n)[0]);
        CHECK(parsed.at(n)[1] == direct.at(n)[1]);
    }
}

TEST_CASE("spectrum CSV round-trips bit-exactly") {
    qwalk::SpectrumRecord rec = qwalk::spectrum_of(qwalk::AlphaPQ{5, 3});
    std::string csv = qwalk::spectrum_csv(rec);
    qwalk::SpectrumRecord back = qwalk::parse_spectrum_csv(csv);
    CHECK(back.alpha == rec.alpha);
    REQUIRE(back.eigenvalues.size() == rec.eigenvalues.size());
    for (size_t i = 0; i < rec.eigenvalues.size(); ++i) {
        CHECK(back.eigenvalues[i] == rec.eigenvalues[i]);
        CHECK(back.residuals[i] == rec.residuals[i]);
    }
    CHECK(qwalk::spectrum_csv(back) == csv);
}

TEST_CASE("walk ordering flag") {
    CliResult cw = run_cli("walk --alpha 1/4 --steps 2 --ordering cw");
    CHECK(cw.exit_code == 0);
    CHECK(cw.output.find("# ordering = cw") != std::string::npos);
    CHECK(run_cli("walk --alpha 1/4 --ordering sideways").exit_code == 2);
}

TEST_CASE("walk rejects malformed input") {
    CHECK(run_cli("walk --alpha nonsense").exit_code == 2);
    CHECK(run_cli("walk --alpha 1/4 --steps -3").exit_code == 2);
    CHECK(run_cli("walk --alpha 1/4 --init 0.5,0,0,0").exit_code == 2);
    CHECK(run_cli("walk --alpha 1/4 --output /nonexistent_dir/x.csv").exit_code == 2);
    CHECK(run_cli("walk --unknown-flag 3").exit_code == 2);
}

TEST_CASE("walk normalizes a slightly off spinor with a warning") {
    CliResult r = run_cli("walk --alpha 1/4 --steps 1 --init 1.00000001,0,0,0");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("renormalizing") != std::string::npos);
}

TEST_CASE("approximate mode is labeled") {
    CliResult r = run_cli("walk --alpha 0.25 --steps 4");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("# mode = approximate") != std::string::npos);
}

TEST_CASE("a theta list sweeps into one CSV per value") {
    fs::path out = temp_file("sweep.csv");
    CliResult r = run_cli("walk --alpha 1/3 --theta 0 1/12 1/6 --steps 40 --output " +
                          out.string());
    CHECK(r.exit_code == 0);
    fs::path dir = out.parent_path();
    CHECK(fs::exists(dir / "sweep.theta_0.csv"));
    CHECK(fs::exists(dir / "sweep.theta_1_12.csv"));
    CHECK(fs::exists(dir / "sweep.theta_1_6.csv"));
    CHECK(read_file(dir / "sweep.theta_1_12.csv").find("# theta = 1/12") != std::string::npos);
    // sweeping to stdout is ambiguous
    CHECK(run_cli("walk --alpha 1/3 --theta 0 1/12 --steps 5").exit_code == 2);
}

TEST_CASE("spectrum of the smallest cell") {
    fs::path out = temp_file("spectrum14.csv");
    CliResult r = run_cli("spectrum --alpha 1/4 --output " + out.string());
    REQUIRE(r.exit_code == 0);
    qwalk::SpectrumRecord rec = qwalk::parse_spectrum_csv(read_file(out));
    REQUIRE(rec.eigenvalues.size() == 4);
    const cplx expected[4] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(rec.eigenvalues[static_cast<size_t>(i)] - expected[i]) < 1e-12);
}

TEST_CASE("spectrum alpha validation names the violated condition") {
    CliResult even_p = run_cli("spectrum --alpha 2/8");
    CHECK(even_p.exit_code == 2);
    CHECK(even_p.output.find("P must be odd") != std::string::npos);

    CliResult coprime = run_cli("spectrum --alpha 3/12");
    CHECK(coprime.exit_code == 2);
    CHECK(coprime.output.find("coprime") != std::string::npos);

    CliResult real_alpha = run_cli("spectrum --alpha 0.25");
    CHECK(real_alpha.exit_code == 2);

    CliResult bad_den = run_cli("spectrum --alpha 1/6");
    CHECK(bad_den.exit_code == 2);
    CHECK(bad_den.output.find("multiple of 4") != std::string::npos);
}

TEST_CASE("spectrum at alpha = 1/12 carries the quarter roots") {
    fs::path out = temp_file("spectrum112.csv");
    CliResult r = run_cli("spectrum --alpha 1/12 --output " + out.string());
    REQUIRE(r.exit_code == 0);
    qwalk::SpectrumRecord rec = qwalk::parse_spectrum_csv(read_file(out));
    REQUIRE(rec.eigenvalues.size() == 12);
    for (cplx target : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)}) {
        double best = 1e9;
        for (const cplx& lambda : rec.eigenvalues)
            best = std::min(best, std::abs(lambda - target));
        CHECK(best < 1e-8);
    }
    // rows ascend by argument
    for (size_t i = 1; i < rec.eigenvalues.size(); ++i)
        CHECK(std::arg(rec.eigenvalues[i - 1]) <= std::arg(rec.eigenvalues[i]));
}

TEST_CASE("verify passes and honors the fault hook") {
    CliResult ok = run_cli("verify --qmax 2");
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("all properties hold") != std::string::npos);

    CliResult fault = run_cli("verify --qmax 1 --inject-eigenvalue-fault 1/4");
    CHECK(fault.exit_code == 3);
    CHECK(fault.output.find("FAIL") != std::string::npos);
    CHECK(fault.output.find("quarter_roots") != std::string::npos);
}

TEST_CASE("verify writes a machine-readable summary") {
    fs::path json = temp_file("verify.json");
    CliResult r = run_cli("verify --qmax 2 --json " + json.string());
    CHECK(r.exit_code == 0);
    std::string text = read_file(json);
    CHECK(text.find("\"pass\": true") != std::string::npos);
    CHECK(text.find("\"half_shift_similarity\"") != std::string::npos);
}

TEST_CASE("butterfly output is deterministic") {
    fs::path a = temp_file("butterfly_a.csv");
    fs::path b = temp_file("butterfly_b.csv");
    CHECK(run_cli("butterfly --qmax 2 --output " + a.string()).exit_code == 0);
    CHECK(run_cli("butterfly --qmax 2 --output " + b.string()).exit_code == 0);
    CHECK(read_file(a) == read_file(b));

    qwalk::ButterflyDataset ds = qwalk::parse_butterfly_csv(read_file(a));
    CHECK(ds.rows.size() == static_cast<size_t>(qwalk::expected_row_count(2)));
}

TEST_CASE("butterfly plot script references the CSV") {
    fs::path csv = temp_file("butterfly_plot.csv");
    fs::path gp = temp_file("butterfly_plot.gp");
    CliResult r = run_cli("butterfly --qmax 1 --output " + csv.string() + " --plot-script " +
                          gp.string());
    CHECK(r.exit_code == 0);
    CHECK(read_file(gp).find(csv.string()) != std::string::npos);
}

TEST_CASE("subcommand is required") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("frobnicate").exit_code == 2);
}
