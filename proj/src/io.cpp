#include "qwalk/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& text) {
    const char* s = text.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw validation_error("malformed number: '" + text + "'");
    return v;
}

namespace {

long long parse_ll_strict(const std::string& text) {
    const char* s = text.c_str();
    char* end = nullptr;
    long long v = std::strtoll(s, &end, 10);
    if (end == s || *end != '\0')
        throw validation_error("malformed integer: '" + text + "'");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

// Iterates lines, handing '#' metadata to one callback and data rows to
// another; the header line is checked against the expected schema.
void scan_csv(const std::string& text, const std::string& header,
              const std::function<void(const std::string&, const std::string&)>& on_meta,
              const std::function<void(const std::vector<std::string>&)>& on_row) {
    std::istringstream in(text);
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line[0] == '#') {
            size_t eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                std::string value = line.substr(eq + 1);
                auto trim = [](std::string& s) {
                    size_t b = s.find_first_not_of(" \t");
                    size_t e = s.find_last_not_of(" \t");
                    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
                };
                trim(key);
                trim(value);
                on_meta(key, value);
            }
            continue;
        }
        if (!seen_header) {
            if (line != header)
                throw validation_error("unexpected CSV header: '" + line + "'");
            seen_header = true;
            continue;
        }
        on_row(split_csv_line(line));
    }
    if (!seen_header)
        throw validation_error("CSV is missing the header line '" + header + "'");
}

} // namespace

std::string walk_csv(const Distribution& d, const WalkRunMeta& meta) {
    std::ostringstream out;
    out << "# qwalk walk distribution\n";
    out << "# alpha = " << meta.alpha_text << "\n";
    out << "# theta = " << meta.theta_text << "\n";
    out << "# mode = " << (meta.exact ? "exact" : "approximate") << "\n";
    out << "# ordering = " << meta.ordering << "\n";
    out << "# steps = " << meta.steps << "\n";
    out << "# initial = " << format_double(meta.initial[0].real()) << ","
        << format_double(meta.initial[0].imag()) << "," << format_double(meta.initial[1].real())
        << "," << format_double(meta.initial[1].imag()) << "\n";
    out << "# eps = " << format_double(meta.eps) << "\n";
    out << "# norm_deviation = " << format_double(meta.norm_deviation) << "\n";
    out << "# support = [" << meta.support.lo << ", " << meta.support.hi << "]\n";
    out << "# second_moment = " << format_double(meta.second_moment) << "\n";
    out << "n,prob\n";
    long long n = d.nmin;
    for (double p : d.prob) {
        out << n << "," << format_double(p) << "\n";
        ++n;
    }
    return out.str();
}

std::string amplitudes_csv(const WalkerState& s, const WalkRunMeta& meta) {
    std::ostringstream out;
    out << "# qwalk walk amplitudes\n";
    out << "# alpha = " << meta.alpha_text << "\n";
    out << "# theta = " << meta.theta_text << "\n";
    out << "# mode = " << (meta.exact ? "exact" : "approximate") << "\n";
    out << "# ordering = " << meta.ordering << "\n";
    out << "# steps = " << meta.steps << "\n";
    out << "n,reL,imL,reR,imR\n";
    for (long long n = s.nmin(); n <= s.nmax(); ++n) {
        const Spinor& sp = s.at(n);
        out << n << "," << format_double(sp[0].real()) << "," << format_double(sp[0].imag()) << ","
            << format_double(sp[1].real()) << "," << format_double(sp[1].imag()) << "\n";
    }
    return out.str();
}

Distribution parse_walk_csv(const std::string& text) {
    Distribution d;
    bool first = true;
    long long expect = 0;
    scan_csv(
        text, "n,prob",
        [&](const std::string& key, const std::string& value) {
            if (key == "steps")
                d.step = parse_ll_strict(value);
        },
        [&](const std::vector<std::string>& fields) {
            if (fields.size() != 2)
                throw validation_error("walk CSV row must have 2 fields");
            long long n = parse_ll_strict(fields[0]);
            if (first) {
                d.nmin = n;
                first = false;
            } else if (n != expect) {
                throw validation_error("walk CSV sites must be contiguous");
            }
            expect = n + 1;
            d.prob.push_back(parse_double(fields[1]));
        });
    return d;
}

WalkerState parse_amplitudes_csv(const std::string& text) {
    long long nmin = 0, steps = 0;
    std::vector<Spinor> amps;
    bool first = true;
    long long expect = 0;
    scan_csv(
        text, "n,reL,imL,reR,imR",
        [&](const std::string& key, const std::string& value) {
            if (key == "steps")
                steps = parse_ll_strict(value);
        },
        [&](const std::vector<std::string>& fields) {
            if (fields.size() != 5)
                throw validation_error("amplitude CSV row must have 5 fields");
            long long n = parse_ll_strict(fields[0]);
            if (first) {
                nmin = n;
                first = false;
            } else if (n != expect) {
                throw validation_error("amplitude CSV sites must be contiguous");
            }
            expect = n + 1;
            amps.push_back({std::complex<double>(parse_double(fields[1]), parse_double(fields[2])),
                            std::complex<double>(parse_double(fields[3]), parse_double(fields[4]))});
        });
    return WalkerState(nmin, std::move(amps), steps);
}

std::string spectrum_csv(const SpectrumRecord& rec, std::optional<double> residual_tol) {
    std::ostringstream out;
    out << "# qwalk spectrum\n";
    out << "# alpha = " << rec.alpha.str() << "\n";
    out << "# P = " << rec.alpha.P << "\n";
    out << "# Q = " << rec.alpha.Q << "\n";
    out << "# order = " << 4 * rec.alpha.Q << "\n";
    if (residual_tol)
        out << "# residual_tol = " << format_double(*residual_tol) << "\n";
    out << "# min_gap = " << format_double(rec.min_gap) << "\n";
    out << "# max_unit_circle_dev = " << format_double(rec.max_unit_circle_dev) << "\n";
    out << "index,re,im,arg,residual\n";
    for (size_t i = 0; i < rec.eigenvalues.size(); ++i) {
        const auto& lambda = rec.eigenvalues[i];
        out << i << "," << format_double(lambda.real()) << "," << format_double(lambda.imag())
            << "," << format_double(std::arg(lambda)) << "," << format_double(rec.residuals[i])
            << "\n";
    }
    return out.str();
}

SpectrumRecord parse_spectrum_csv(const std::string& text) {
    SpectrumRecord rec;
    long long P = 0, Q = 0;
    scan_csv(
        text, "index,re,im,arg,residual",
        [&](const std::string& key, const std::string& value) {
            if (key == "P")
                P = parse_ll_strict(value);
            else if (key == "Q")
                Q = parse_ll_strict(value);
            else if (key == "min_gap")
                rec.min_gap = parse_double(value);
            else if (key == "max_unit_circle_dev")
                rec.max_unit_circle_dev = parse_double(value);
        },
        [&](const std::vector<std::string>& fields) {
            if (fields.size() != 5)
                throw validation_error("spectrum CSV row must have 5 fields");
            rec.eigenvalues.emplace_back(parse_double(fields[1]), parse_double(fields[2]));
            rec.residuals.push_back(parse_double(fields[4]));
        });
    rec.alpha = AlphaPQ::make(P, Q);
    return rec;
}

std::string butterfly_csv(const ButterflyDataset& ds) {
    std::ostringstream out;
    out << "# qwalk butterfly dataset\n";
    out << "# qmax = " << ds.qmax << "\n";
    out << "# tol = " << format_double(ds.tol) << "\n";
    out << "# fractions = " << ds.fraction_count << "\n";
    out << "# rows = " << ds.rows.size() << "\n";
    out << "# max_residual = " << format_double(ds.max_residual) << "\n";
    out << "# max_unit_circle_dev = " << format_double(ds.max_unit_circle_dev) << "\n";
    out << "# max_unitarity_defect = " << format_double(ds.max_unitarity_defect) << "\n";
    out << "P,Q,alpha,arg_lambda\n";
    for (const ButterflyRow& r : ds.rows)
        out << r.P << "," << r.Q << "," << format_double(r.alpha) << "," << format_double(r.arg)
            << "\n";
    return out.str();
}

ButterflyDataset parse_butterfly_csv(const std::string& text) {
    ButterflyDataset ds;
    size_t declared_rows = 0;
    scan_csv(
        text, "P,Q,alpha,arg_lambda",
        [&](const std::string& key, const std::string& value) {
            if (key == "qmax")
                ds.qmax = parse_ll_strict(value);
            else if (key == "tol")
                ds.tol = parse_double(value);
            else if (key == "fractions")
                ds.fraction_count = static_cast<size_t>(parse_ll_strict(value));
            else if (key == "rows")
                declared_rows = static_cast<size_t>(parse_ll_strict(value));
            else if (key == "max_residual")
                ds.max_residual = parse_double(value);
            else if (key == "max_unit_circle_dev")
                ds.max_unit_circle_dev = parse_double(value);
            else if (key == "max_unitarity_defect")
                ds.max_unitarity_defect = parse_double(value);
        },
        [&](const std::vector<std::string>& fields) {
            if (fields.size() != 4)
                throw validation_error("butterfly CSV row must have 4 fields");
            ds.rows.push_back({parse_ll_strict(fields[0]), parse_ll_strict(fields[1]),
                               parse_double(fields[2]), parse_double(fields[3])});
        });
    if (declared_rows != ds.rows.size())
        throw validation_error("butterfly CSV row count does not match its metadata");
    return ds;
}

std::string butterfly_plot_script(const std::string& csv_path) {
    std::ostringstream out;
    out << "# render with: gnuplot butterfly.gp\n";
    out << "set datafile separator ','\n";
    out << "set datafile commentschars '#'\n";
    out << "set xlabel 'alpha'\n";
    out << "set ylabel 'arg(lambda)'\n";
    out << "set xrange [0:1]\n";
    out << "set yrange [-pi:pi]\n";
    out << "set terminal pngcairo size 1200,900\n";
    out << "set output 'butterfly.png'\n";
    out << "plot '" << csv_path << "' using 3:4 with dots lc rgb 'black' notitle\n";
    return out.str();
}

} // namespace qwalk
