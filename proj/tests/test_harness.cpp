#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "mcphy/harness.hpp"
#include "mcphy/svg.hpp"

using namespace mcphy;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SimConfig small_config(SchemeName scheme, ChannelModel channel) {
    SimConfig cfg;
    cfg.scheme = scheme;
    cfg.filter = FilterName::rect;
    cfg.num_subcarriers = 16;
    cfg.cp_len = 8;
    cfg.channel = channel;
    cfg.snr_db = {kInf};
    cfg.min_bits = 10000;
    cfg.max_frames = 100;
    cfg.master_seed = 42;
    return cfg;
}

}  // namespace

TEST_CASE("noiseless ideal-channel frames decode without error in every scheme") {
    const SchemeName schemes[] = {SchemeName::siso_oqam, SchemeName::siso_cpofdm,
                                  SchemeName::alamouti_tr_oqam, SchemeName::alamouti_cpofdm};
    for (SchemeName s : schemes) {
        const FrameRunner runner(small_config(s, ChannelModel::awgn));
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            const FrameResult r = runner.run(seed, kInf);
            INFO("scheme " << to_string(s) << " seed " << seed);
            CHECK(r.bits == runner.bits_per_frame());
            CHECK(r.bit_errors == 0);
        }
    }
}

TEST_CASE("two-antenna schemes on flat unit channels reduce to the single-antenna chain") {
    // With identical ideal channels the space-time decode collapses to the
    // plain receiver, so the noiseless decoded bits match the payload exactly
    // on both branch counts.
    for (auto [miso, siso] : {std::pair{SchemeName::alamouti_tr_oqam, SchemeName::siso_oqam},
                              std::pair{SchemeName::alamouti_cpofdm, SchemeName::siso_cpofdm}}) {
        SimConfig cfg_m = small_config(miso, ChannelModel::awgn);
        SimConfig cfg_s = small_config(siso, ChannelModel::awgn);
        cfg_m.frame_instants = cfg_s.frame_instants = 52;  // even column pairing
        const FrameRunner a(cfg_m), b(cfg_s);
        REQUIRE(a.bits_per_frame() == b.bits_per_frame());
        for (std::uint64_t seed : {7ull, 8ull}) {
            CHECK(a.run(seed, kInf).bit_errors == 0);
            CHECK(b.run(seed, kInf).bit_errors == 0);
        }
    }
}

TEST_CASE("sweeps are deterministic for a fixed master seed") {
    SimConfig cfg = small_config(SchemeName::siso_cpofdm, ChannelModel::rayleigh);
    cfg.snr_db = {10.0, 20.0};
    const auto first = run_sweep(cfg);
    const auto second = run_sweep(cfg);
    REQUIRE(first.size() == second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].bits == second[i].bits);
        CHECK(first[i].bit_errors == second[i].bit_errors);
        CHECK(first[i].frames == second[i].frames);
    }

    SimConfig other = cfg;
    other.master_seed = cfg.master_seed + 1;
    const auto third = run_sweep(other);
    bool any_difference = false;
    for (std::size_t i = 0; i < first.size(); ++i)
        any_difference = any_difference || third[i].bit_errors != first[i].bit_errors;
    CHECK(any_difference);
}

TEST_CASE("results are byte-identical across worker counts") {
    SimConfig cfg = small_config(SchemeName::siso_cpofdm, ChannelModel::rayleigh);
    cfg.snr_db = {8.0, 16.0};
    const std::string lone = emit_csv(run_sweep(cfg, 1));
    const std::string crowd = emit_csv(run_sweep(cfg, 8));
    CHECK(lone == crowd);
}

TEST_CASE("emitted results parse back to the same records") {
    SimConfig cfg = small_config(SchemeName::alamouti_cpofdm, ChannelModel::rayleigh);
    cfg.snr_db = {12.5, 5.0};
    const auto records = run_sweep(cfg);
    REQUIRE(records.size() == 2);
    CHECK(records[0].snr_db == 5.0);  // sorted ascending
    CHECK(records[1].snr_db == 12.5);

    const auto parsed = parse_csv(emit_csv(records));
    REQUIRE(parsed.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(parsed[i].scheme == records[i].scheme);
        CHECK(parsed[i].filter == records[i].filter);
        CHECK(parsed[i].snr_db == records[i].snr_db);
        CHECK(parsed[i].frames == records[i].frames);
        CHECK(parsed[i].bits == records[i].bits);
        CHECK(parsed[i].bit_errors == records[i].bit_errors);
        CHECK(parsed[i].ber == records[i].ber);
        CHECK(parsed[i].seed == records[i].seed);
    }

    CHECK(parse_csv(std::string(csv_header) + "\n").empty());
    CHECK_THROWS_AS(parse_csv("totally,not,results\n"), IoError);
    CHECK_THROWS_AS(parse_csv(std::string(csv_header) + "\nonly,three,fields\n"), IoError);
}

TEST_CASE("error rate falls with SNR by more than the joint confidence width") {
    SimConfig cfg = small_config(SchemeName::siso_cpofdm, ChannelModel::rayleigh);
    cfg.snr_db = {5.0, 25.0};
    const auto records = run_sweep(cfg);
    REQUIRE(records.size() == 2);
    const BerRecord& low = records[0];
    const BerRecord& high = records[1];
    CHECK(low.ber - low.ci3sigma() > high.ber + high.ci3sigma());
}

TEST_CASE("frame budget exhaustion is flagged as truncation") {
    SimConfig cfg = small_config(SchemeName::siso_cpofdm, ChannelModel::rayleigh);
    cfg.snr_db = {10.0};
    cfg.min_bits = 1000000;
    cfg.max_frames = 2;
    const auto records = run_sweep(cfg);
    REQUIRE(records.size() == 1);
    CHECK(records[0].truncated);
    CHECK(records[0].frames == 2);
    CHECK(records[0].bits == 2 * FrameRunner(cfg).bits_per_frame());

    cfg.max_frames = 10000;
    const auto full = run_sweep(cfg);
    CHECK_FALSE(full[0].truncated);
    CHECK(full[0].bits >= cfg.min_bits);
}

TEST_CASE("noisy channel estimates at the prefilter degrade the error rate") {
    SimConfig cfg = small_config(SchemeName::alamouti_tr_oqam, ChannelModel::rayleigh);
    cfg.snr_db = {18.0};
    const auto exact = run_sweep(cfg);
    cfg.estimation_noise_db = 3.0;
    const auto noisy = run_sweep(cfg);
    CHECK(noisy[0].bit_errors > exact[0].bit_errors);
}

TEST_CASE("configuration text round-trips every key") {
    const std::string text =
        "# sweep description\n"
        "scheme = alamouti_tr_oqam\n"
        "filter = iota4\n"
        "num_subcarriers = 64   # mid-size grid\n"
        "cp_len = 16\n"
        "frame_instants = 40\n"
        "delays_us = [0, 0.2527, 0.32]\n"
        "powers_db = [0, -3, -2.2]\n"
        "sample_rate_hz = 10e6\n"
        "snr_db = [0, 5, 10, 15]\n"
        "min_bits = 20000\n"
        "max_frames = 500\n"
        "master_seed = 99\n"
        "equalizer = mmse\n"
        "delay_mode = nearest\n"
        "channel = rayleigh\n"
        "miso_power = per_antenna\n"
        "estimation_noise_db = 12\n";
    const SimConfig cfg = parse_config(text);
    CHECK(cfg.scheme == SchemeName::alamouti_tr_oqam);
    CHECK(cfg.filter == FilterName::iota4);
    CHECK(cfg.num_subcarriers == 64);
    CHECK(cfg.cp_len == 16);
    CHECK(cfg.frame_instants == 40);
    CHECK(cfg.profile.delays_us == std::vector<double>{0.0, 0.2527, 0.32});
    CHECK(cfg.profile.powers_db == std::vector<double>{0.0, -3.0, -2.2});
    CHECK(cfg.sample_rate_hz == 10e6);
    CHECK(cfg.snr_db == std::vector<double>{0.0, 5.0, 10.0, 15.0});
    CHECK(cfg.min_bits == 20000);
    CHECK(cfg.max_frames == 500);
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.equalizer == EqualizerType::mmse);
    CHECK(cfg.delay_mode == DelayRounding::nearest_sample);
    CHECK(cfg.channel == ChannelModel::rayleigh);
    CHECK(cfg.miso_power == MisoPower::per_antenna);
    REQUIRE(cfg.estimation_noise_db.has_value());
    CHECK(*cfg.estimation_noise_db == 12.0);
}

TEST_CASE("malformed configurations are rejected") {
    const std::string base = "scheme = siso_cpofdm\nsnr_db = [10]\n";
    CHECK_THROWS_AS(parse_config("snr_db = [10]\n"), ConfigError);          // no scheme
    CHECK_THROWS_AS(parse_config("scheme = siso_cpofdm\n"), ConfigError);   // no snr list
    CHECK_THROWS_AS(parse_config(base + "mystery_key = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(base + "min_bits = 200\n"), ConfigError);  // too few bits
    CHECK_THROWS_AS(parse_config(base + "num_subcarriers = 48\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(base + "frame_instants = 9\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(base + "cp_len = many\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(base + "snr_db = [ ]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(base + "master_seed = 1\nmaster_seed = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scheme siso_cpofdm\nsnr_db = [1]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(base + "scheme = warp_drive\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(base + "delays_us = 0, 1\n"), ConfigError);
    CHECK_THROWS_AS(run_sweep(parse_config(base), 0), ConfigError);
}

TEST_CASE("single-frame helper matches the runner") {
    SimConfig cfg = small_config(SchemeName::siso_cpofdm, ChannelModel::rayleigh);
    const FrameResult via_helper = run_frame(cfg, 77, 12.0);
    const FrameResult via_runner = FrameRunner(cfg).run(77, 12.0);
    CHECK(via_helper.bits == via_runner.bits);
    CHECK(via_helper.bit_errors == via_runner.bit_errors);
}

TEST_CASE("plots carry one series per scheme and drop zero-error points") {
    std::vector<BerRecord> records;
    for (double snr : {0.0, 5.0, 10.0}) {
        BerRecord a{"siso_cpofdm", "none", snr, 10, 8000, static_cast<std::uint64_t>(800 / (1 + snr)), 0.0, 1};
        a.ber = static_cast<double>(a.bit_errors) / static_cast<double>(a.bits);
        records.push_back(a);
        BerRecord b{"siso_oqam", "iota4", snr, 10, 8000, snr < 10 ? 40u : 0u, 0.0, 1};
        b.ber = static_cast<double>(b.bit_errors) / static_cast<double>(b.bits);
        records.push_back(b);
    }
    const std::string svg = render_ber_plot(records, "comparison");
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("siso_cpofdm") != std::string::npos);
    CHECK(svg.find("siso_oqam / iota4") != std::string::npos);
    // Two series, five plottable points in total (the zero-error one is skipped).
    std::size_t circles = 0;
    for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
         pos = svg.find("<circle", pos + 1))
        ++circles;
    CHECK(circles == 5);
    CHECK(render_ber_plot({}).find("</svg>") != std::string::npos);
}
