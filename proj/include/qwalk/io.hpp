#pragma once

#include <optional>
#include <string>

#include "qwalk/butterfly.hpp"
#include "qwalk/spectral.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

/// 17-significant-digit decimal rendering; round-trips doubles exactly.
std::string format_double(double v);

/// Exact inverse of format_double; throws validation_error on junk.
double parse_double(const std::string& text);

struct WalkRunMeta {
    std::string alpha_text;
    std::string theta_text;
    bool exact = true;
    std::string ordering = "wc";
    long long steps = 0;
    Spinor initial{};
    double eps = 1e-12;
    double norm_deviation = 0.0;
    SiteInterval support{0, 0};
    double second_moment = 0.0;
};

/// Distribution CSV: '#' metadata lines (parameters and run summary), then
/// header `n,prob` and one row per window site.
std::string walk_csv(const Distribution& d, const WalkRunMeta& meta);

/// Amplitude CSV: header `n,reL,imL,reR,imR`.
std::string amplitudes_csv(const WalkerState& s, const WalkRunMeta& meta);

/// Reads the data rows (and step metadata) back into a Distribution.
Distribution parse_walk_csv(const std::string& text);

/// Reads an amplitude CSV back into a WalkerState.
WalkerState parse_amplitudes_csv(const std::string& text);

/// Spectrum CSV: header `index,re,im,arg,residual`, rows ascending by arg.
/// When given, the residual tolerance is echoed into the metadata.
std::string spectrum_csv(const SpectrumRecord& rec,
                         std::optional<double> residual_tol = std::nullopt);

SpectrumRecord parse_spectrum_csv(const std::string& text);

/// Butterfly CSV: '#' metadata (qmax, tolerance, counts, QA maxima), header
/// `P,Q,alpha,arg_lambda`.
std::string butterfly_csv(const ButterflyDataset& ds);

ButterflyDataset parse_butterfly_csv(const std::string& text);

/// gnuplot script rendering arg(lambda) against alpha as points.
std::string butterfly_plot_script(const std::string& csv_path);

} // namespace qwalk
