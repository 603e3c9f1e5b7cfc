#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "mcphy/analysis.hpp"
#include "mcphy/harness.hpp"
#include "mcphy/svg.hpp"
#include "mcphy/time_reversal.hpp"

namespace {

using namespace mcphy;

int cmd_ber(const std::string& config_path, const std::string& out_path,
            const std::string& plot_path, unsigned workers, bool strict) {
    const SimConfig cfg = load_config(config_path);
    const auto records = run_sweep(cfg, workers);

    std::printf("%-18s %-8s %8s %12s %12s %10s %8s\n", "scheme", "filter", "snr_db", "ber",
                "ci3sigma", "bits", "frames");
    bool any_truncated = false;
    for (const BerRecord& r : records) {
        std::printf("%-18s %-8s %8.3g %12.6g %12.3g %10llu %8llu%s\n", r.scheme.c_str(),
                    r.filter.c_str(), r.snr_db, r.ber, r.ci3sigma(),
                    static_cast<unsigned long long>(r.bits),
                    static_cast<unsigned long long>(r.frames),
                    r.truncated ? "  [truncated]" : "");
        any_truncated = any_truncated || r.truncated;
    }
    if (!out_path.empty()) write_text_file(out_path, emit_csv(records));
    if (!plot_path.empty()) write_text_file(plot_path, render_ber_plot(records));
    if (strict && any_truncated) {
        std::cerr << "error: at least one sweep point hit max_frames before min_bits\n";
        return 2;
    }
    return 0;
}

int cmd_filters(const std::string& name, std::size_t M, const std::string& out_path,
                const std::string& in_path) {
    PrototypeFilter f;
    if (!in_path.empty()) {
        f = load_filter(in_path);
    } else {
        if (name.empty() || M == 0) {
            std::cerr << "error: generation needs --name and --M\n";
            return 1;
        }
        f = build_filter(filter_name_from_string(name), M);
    }
    double energy = 0.0;
    for (double c : f.coeffs) energy += c * c;
    const auto loc = localization_measures(f);
    std::printf("name:    %s\n", to_string(f.name).c_str());
    std::printf("M:       %zu\n", f.num_subcarriers);
    std::printf("length:  %zu\n", f.coeffs.size());
    std::printf("energy:  %.12f\n", energy);
    std::printf("defect:  %.3e (tolerance %.1e)\n", f.orthogonality_defect, f.defect_tolerance);
    std::printf("time spread:        %.6g\n", loc.time_spread);
    std::printf("frequency spread:   %.6g\n", loc.freq_spread);
    std::printf("uncertainty product:%.6g\n", loc.uncertainty_product);
    std::printf("concentration:      %.6g\n", loc.concentration);
    if (!f.functional.empty()) std::printf("functional: %s\n", f.functional.c_str());
    if (!out_path.empty()) {
        save_filter(f, out_path);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_analyze_weights(const std::string& name, std::size_t M, std::size_t span_m,
                        std::size_t span_n) {
    const PrototypeFilter f = build_filter(filter_name_from_string(name), M);
    const InterferenceTable table = interference_table(f, span_m, span_n);
    std::printf("interference weights for %s, M=%zu (rows: time offset q; columns: "
                "subcarrier offset p)\n",
                to_string(f.name).c_str(), M);
    std::printf("%6s", "");
    for (int p = table.p_min; p <= table.p_max; ++p) std::printf(" %+10d", p);
    std::printf("\n");
    for (int q = -static_cast<int>(table.q_span); q <= static_cast<int>(table.q_span); ++q) {
        std::printf("q=%+3d ", q);
        for (int p = table.p_min; p <= table.p_max; ++p)
            std::printf(" %+10.6f", table.weight(p, q));
        std::printf("\n");
    }
    std::printf("max real leak: %.3e\n", table.max_real_leak);
    return 0;
}

int cmd_analyze_tr(std::uint64_t seed, const std::string& config_path) {
    PowerDelayProfile profile = PowerDelayProfile::three_tap_default();
    double fs = 10e6;
    DelayRounding rounding = DelayRounding::floor_sample;
    std::size_t M = 16;
    if (!config_path.empty()) {
        const SimConfig cfg = load_config(config_path);
        profile = cfg.profile;
        fs = cfg.sample_rate_hz;
        rounding = cfg.delay_mode;
        M = cfg.num_subcarriers;
    }
    Rng rng(seed);
    const auto channel = draw_channel(profile, fs, rounding, rng);
    const auto prefilter = tr_prefilter(channel.taps);
    const auto eq = equivalent_channel(channel.taps, prefilter, M);

    auto dump = [](const char* label, const std::vector<cplx>& taps) {
        std::printf("%s (%zu taps):\n", label, taps.size());
        for (std::size_t i = 0; i < taps.size(); ++i)
            std::printf("  [%2zu] %+12.8f %+12.8fi   |.| = %.8f\n", i, taps[i].real(),
                        taps[i].imag(), std::abs(taps[i]));
    };
    dump("channel", channel.taps);
    dump("prefilter", prefilter);
    dump("cascade", eq.taps);
    std::printf("cascade centre index: %zu, centre tap %.10f\n", eq.centre_index,
                eq.taps[eq.centre_index].real());
    std::printf("max imaginary residual of the centred spectrum: %.3e\n", eq.max_imag_residual);
    std::printf("per-subcarrier real response (M=%zu):\n", M);
    for (std::size_t m = 0; m < M; ++m) std::printf("  m=%2zu  %+.8f\n", m, eq.freq_response[m]);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multicarrier link simulator: filter-bank and prefix transceivers, "
                 "two-antenna time-reversal combining, Monte-Carlo error-rate sweeps"};
    app.require_subcommand(1);

    auto* ber = app.add_subcommand("ber", "Run a bit-error-rate sweep from a config file");
    std::string config_path, out_path, plot_path;
    unsigned workers = 1;
    bool strict = false;
    ber->add_option("--config", config_path, "sweep configuration file")->required();
    ber->add_option("--out", out_path, "write results CSV here");
    ber->add_option("--plot", plot_path, "write a log-scale SVG plot here");
    ber->add_option("--workers", workers, "parallel frame workers (result-invariant)");
    ber->add_flag("--strict", strict, "exit nonzero if any point was truncated by max_frames");
    ber->footer("Config keys: scheme (siso_oqam|siso_cpofdm|alamouti_tr_oqam|alamouti_cpofdm),\n"
                "filter (rect|iota4|tfl1), num_subcarriers, cp_len, frame_instants,\n"
                "delays_us [..], powers_db [..], sample_rate_hz, snr_db [..], min_bits,\n"
                "max_frames, master_seed, equalizer (zf|mmse), delay_mode\n"
                "(floor|nearest|sinc8), channel (rayleigh|awgn), miso_power\n"
                "(total|per_antenna), estimation_noise_db, filter_file.\n"
                "Lines are 'key = value'; '#' starts a comment.");

    auto* filters = app.add_subcommand("filters", "Generate or inspect pulse coefficient files");
    std::string f_name, f_out, f_in;
    std::size_t f_M = 0;
    filters->add_option("--name", f_name, "pulse family: rect, iota4 or tfl1");
    filters->add_option("--M", f_M, "subcarrier count (power of two)");
    filters->add_option("--out", f_out, "write the coefficient fixture here");
    filters->add_option("--in", f_in, "inspect an existing fixture instead of generating");

    auto* analyze = app.add_subcommand("analyze", "Numerical studies of pulses and channels");
    analyze->require_subcommand(1);
    auto* weights = analyze->add_subcommand(
        "weights", "Print the lattice interference weight table of a pulse");
    std::string w_name = "iota4";
    std::size_t w_M = 16, span_m = 2, span_n = 3;
    weights->add_option("--filter", w_name, "pulse family");
    weights->add_option("--M", w_M, "subcarrier count");
    weights->add_option("--span-m", span_m, "subcarrier offsets to cover");
    weights->add_option("--span-n", span_n, "time offsets to cover");
    auto* tr = analyze->add_subcommand(
        "tr", "Draw a channel and dump its time-reversal prefilter and cascade");
    std::uint64_t tr_seed = 1;
    std::string tr_config;
    tr->add_option("--seed", tr_seed, "channel draw seed");
    tr->add_option("--config", tr_config, "take profile, delay mode and M from this config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(ber)) return cmd_ber(config_path, out_path, plot_path, workers, strict);
        if (app.got_subcommand(filters)) return cmd_filters(f_name, f_M, f_out, f_in);
        if (weights->parsed()) return cmd_analyze_weights(w_name, w_M, span_m, span_n);
        if (tr->parsed()) return cmd_analyze_tr(tr_seed, tr_config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
