#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mcphy/alamouti.hpp"
#include "mcphy/channel.hpp"
#include "mcphy/common.hpp"
#include "mcphy/cp_ofdm.hpp"
#include "mcphy/equalizer.hpp"
#include "mcphy/modulation.hpp"
#include "mcphy/oqam.hpp"
#include "mcphy/prototype_filter.hpp"
#include "mcphy/rng.hpp"
#include "mcphy/time_reversal.hpp"

namespace mcphy {

/*
 * Monte-Carlo bit-error-rate harness.  A configuration names one of four
 * transceiver chains, a channel model and a sweep of transmit SNR points;
 * the harness runs independently seeded frames until each point has enough
 * bits, in parallel if asked, with results that do not depend on the worker
 * count.  Noise is always referenced to the measured pre-channel transmit
 * power.
 */

enum class SchemeName { siso_oqam, siso_cpofdm, alamouti_tr_oqam, alamouti_cpofdm };

inline std::string to_string(SchemeName s) {
    switch (s) {
        case SchemeName::siso_oqam: return "siso_oqam";
        case SchemeName::siso_cpofdm: return "siso_cpofdm";
        case SchemeName::alamouti_tr_oqam: return "alamouti_tr_oqam";
        case SchemeName::alamouti_cpofdm: return "alamouti_cpofdm";
    }
    throw ConfigError("unknown scheme");
}

inline SchemeName scheme_from_string(const std::string& s) {
    if (s == "siso_oqam") return SchemeName::siso_oqam;
    if (s == "siso_cpofdm") return SchemeName::siso_cpofdm;
    if (s == "alamouti_tr_oqam") return SchemeName::alamouti_tr_oqam;
    if (s == "alamouti_cpofdm") return SchemeName::alamouti_cpofdm;
    throw ConfigError("unknown scheme '" + s + "'");
}

// Fading or additive noise only.
enum class ChannelModel { rayleigh, awgn };

// How the two-antenna schemes spend power: "total" splits the single-antenna
// budget across both antennas (fair aggregate comparison), "per_antenna"
// leaves each antenna at the single-antenna level.
enum class MisoPower { total, per_antenna };

struct SimConfig {
    SchemeName scheme = SchemeName::siso_oqam;
    FilterName filter = FilterName::iota4;
    std::size_t num_subcarriers = 128;
    std::size_t cp_len = 32;
    std::size_t frame_instants = 50;  // real half-symbol instants per frame
    PowerDelayProfile profile = PowerDelayProfile::three_tap_default();
    double sample_rate_hz = 10e6;
    std::vector<double> snr_db;
    std::uint64_t min_bits = 100000;
    std::uint64_t max_frames = 1000000;
    std::uint64_t master_seed = 1;
    EqualizerType equalizer = EqualizerType::zf;
    DelayRounding delay_mode = DelayRounding::floor_sample;
    ChannelModel channel = ChannelModel::rayleigh;
    MisoPower miso_power = MisoPower::total;
    std::optional<double> estimation_noise_db;  // channel-estimate SNR at the prefilter
    std::optional<std::string> filter_file;     // load pulse coefficients instead of building

    bool uses_oqam() const {
        return scheme == SchemeName::siso_oqam || scheme == SchemeName::alamouti_tr_oqam;
    }
    bool is_miso() const {
        return scheme == SchemeName::alamouti_tr_oqam || scheme == SchemeName::alamouti_cpofdm;
    }

    void validate() const {
        if (snr_db.empty()) throw ConfigError("snr_db list must not be empty");
        if (min_bits < 10000) throw ConfigError("min_bits must be at least 10000");
        if (max_frames == 0) throw ConfigError("max_frames must be positive");
        if (num_subcarriers < 2 || !is_power_of_two(num_subcarriers))
            throw ConfigError("num_subcarriers must be a power of two and at least 2");
        if (frame_instants < 2 || frame_instants % 2 != 0)
            throw ConfigError("frame_instants must be even and at least 2");
        if (channel == ChannelModel::rayleigh) profile.validate();
        if (!(sample_rate_hz > 0.0)) throw ConfigError("sample_rate_hz must be positive");
    }
};

// One sweep point.
struct BerRecord {
    std::string scheme;
    std::string filter;
    double snr_db = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    std::uint64_t seed = 0;
    bool truncated = false;  // max_frames hit before min_bits (not serialized)

    // Half-width of the three-sigma binomial confidence interval.
    double ci3sigma() const {
        if (bits == 0) return 0.0;
        return 3.0 * std::sqrt(ber * (1.0 - ber) / static_cast<double>(bits));
    }
};

namespace detail {

inline std::uint64_t count_bit_errors(const std::vector<std::uint8_t>& a,
                                      const std::vector<std::uint8_t>& b) {
    if (a.size() != b.size()) throw FramingError("bit streams differ in length");
    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < a.size(); ++i) errors += a[i] != b[i];
    return errors;
}

inline ComplexSymbolGrid bits_to_grid(const std::vector<std::uint8_t>& bits, std::size_t M,
                                      std::size_t cols) {
    const auto symbols = qpsk_modulate(bits);
    ComplexSymbolGrid grid(M, cols);
    for (std::size_t n = 0; n < cols; ++n)
        for (std::size_t m = 0; m < M; ++m) grid.at(m, n) = symbols[n * M + m];
    return grid;
}

inline std::vector<std::uint8_t> grid_to_bits(const ComplexSymbolGrid& grid) {
    std::vector<cplx> flat;
    flat.reserve(grid.rows() * grid.cols());
    for (std::size_t n = 0; n < grid.cols(); ++n)
        for (std::size_t m = 0; m < grid.rows(); ++m) flat.push_back(grid.at(m, n));
    return qpsk_hard_bits(flat);
}

}  // namespace detail

struct FrameResult {
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
};

/*
 * Executes single frames of the configured chain.  Construction does the
 * expensive, frame-invariant work (pulse design, transform planning); run()
 * is const and safe to call concurrently from several workers.
 */
class FrameRunner {
public:
    explicit FrameRunner(SimConfig cfg) : cfg_(std::move(cfg)) {
        cfg_.validate();
        if (cfg_.uses_oqam()) {
            PrototypeFilter f = cfg_.filter_file ? load_filter(*cfg_.filter_file)
                                                 : build_filter(cfg_.filter, cfg_.num_subcarriers);
            if (f.num_subcarriers != cfg_.num_subcarriers)
                throw ConfigError("loaded pulse was designed for a different subcarrier count");
            oqam_.emplace(std::move(f));
        } else {
            cpofdm_.emplace(cfg_.num_subcarriers, cfg_.cp_len);
        }
    }

    const SimConfig& config() const { return cfg_; }

    // Payload bits carried by one frame.
    std::size_t bits_per_frame() const {
        return cfg_.num_subcarriers * 2 * qpsk_columns();
    }

    // QPSK columns per frame; the space-time-coded prefix scheme needs an even
    // count, so an odd column budget rounds up.
    std::size_t qpsk_columns() const {
        std::size_t cols = cfg_.frame_instants / 2;
        if (cfg_.scheme == SchemeName::alamouti_cpofdm && cols % 2 != 0) ++cols;
        return cols;
    }

    FrameResult run(std::uint64_t frame_seed, double snr_db) const {
        // Independent substreams per random ingredient: the fading draw does
        // not depend on the payload length or on downstream consumption, so
        // different schemes under the same seed face the same channel states
        // (common random numbers sharpen scheme-to-scheme comparisons).
        Rng payload_rng(seed_combine(frame_seed, 1));
        FrameRngs rngs{Rng(seed_combine(frame_seed, 2)), Rng(seed_combine(frame_seed, 3)),
                       Rng(seed_combine(frame_seed, 4))};
        const auto bits = payload_rng.bits(bits_per_frame());
        std::vector<std::uint8_t> decided;
        switch (cfg_.scheme) {
            case SchemeName::siso_oqam: decided = run_siso_oqam(bits, snr_db, rngs); break;
            case SchemeName::siso_cpofdm: decided = run_siso_cpofdm(bits, snr_db, rngs); break;
            case SchemeName::alamouti_tr_oqam:
                decided = run_alamouti_oqam(bits, snr_db, rngs);
                break;
            case SchemeName::alamouti_cpofdm:
                decided = run_alamouti_cpofdm(bits, snr_db, rngs);
                break;
        }
        return {bits.size(), detail::count_bit_errors(bits, decided)};
    }

private:
    struct FrameRngs {
        Rng fading;    // channel tap draws
        Rng estimate;  // channel-estimate corruption
        Rng noise;     // receiver noise
    };
    // One fading draw, or the ideal single tap for the additive-noise model.
    std::vector<cplx> draw_taps(Rng& rng) const {
        if (cfg_.channel == ChannelModel::awgn) return {cplx(1.0, 0.0)};
        return draw_channel(cfg_.profile, cfg_.sample_rate_hz, cfg_.delay_mode, rng).taps;
    }

    // Channel estimate handed to the prefilter: exact, or corrupted at the
    // configured estimate SNR (error energy relative to the channel energy,
    // spread evenly over the taps).
    std::vector<cplx> estimate_taps(const std::vector<cplx>& taps, Rng& rng) const {
        if (!cfg_.estimation_noise_db) return taps;
        double energy = 0.0;
        for (const cplx& t : taps) energy += std::norm(t);
        const double error_var = energy * std::pow(10.0, -*cfg_.estimation_noise_db / 10.0) /
                                 static_cast<double>(taps.size());
        std::vector<cplx> estimate(taps);
        for (cplx& t : estimate) t += std::sqrt(error_var / 2.0) * rng.gaussian_cplx();
        return estimate;
    }

    double antenna_scale() const {
        return cfg_.miso_power == MisoPower::total ? inv_sqrt2 : 1.0;
    }

    // Transmit-referenced noise.  The reference is the radiated energy spread
    // over the information-bearing interval (subcarrier count times column
    // count), so prefix samples and pulse tails cost transmit power instead
    // of being free: schemes with more overhead see proportionally more noise
    // at the same nominal SNR.  Two-antenna totals are halved in
    // "per_antenna" accounting.
    double noise_variance(double total_tx_energy, double snr_db) const {
        const double useful_samples =
            static_cast<double>(cfg_.num_subcarriers) * static_cast<double>(qpsk_columns());
        double reference = total_tx_energy / useful_samples;
        if (cfg_.is_miso() && cfg_.miso_power == MisoPower::per_antenna) reference /= 2.0;
        return noise_variance_for_snr(reference, snr_db);
    }

    static double signal_energy(const std::vector<cplx>& x) {
        return measure_power(x) * static_cast<double>(x.size());
    }

    std::vector<std::uint8_t> run_siso_oqam(const std::vector<std::uint8_t>& bits, double snr_db,
                                            FrameRngs& rngs) const {
        const std::size_t M = cfg_.num_subcarriers;
        const std::size_t instants = cfg_.frame_instants;
        const auto grid = detail::bits_to_grid(bits, M, qpsk_columns());
        const auto tx = oqam_->synthesize(oqam_stagger(grid));

        const auto taps = draw_taps(rngs.fading);
        auto rx = apply_channel(tx, taps);
        const double nv = noise_variance(signal_energy(tx), snr_db);
        add_awgn(rx, nv, rngs.noise);

        const auto demod = oqam_->analyze(rx, instants);
        const auto H = channel_frequency_response(taps, M);
        const auto eq = equalize(demod, H, cfg_.equalizer, nv);
        RealSymbolGrid reals(M, instants);
        for (std::size_t n = 0; n < instants; ++n)
            for (std::size_t m = 0; m < M; ++m) reals.at(m, n) = eq.at(m, n).real();
        return detail::grid_to_bits(oqam_destagger(reals));
    }

    std::vector<std::uint8_t> run_siso_cpofdm(const std::vector<std::uint8_t>& bits,
                                              double snr_db, FrameRngs& rngs) const {
        const std::size_t M = cfg_.num_subcarriers;
        const std::size_t cols = qpsk_columns();
        const auto grid = detail::bits_to_grid(bits, M, cols);
        const auto tx = cpofdm_->modulate(grid);

        const auto taps = draw_taps(rngs.fading);
        auto rx = apply_channel(tx, taps);
        const double nv = noise_variance(signal_energy(tx), snr_db);
        add_awgn(rx, nv, rngs.noise);

        const auto demod = cpofdm_->demodulate(rx, cols);
        const auto H = channel_frequency_response(taps, M);
        return detail::grid_to_bits(equalize(demod, H, cfg_.equalizer, nv));
    }

    std::vector<std::uint8_t> run_alamouti_oqam(const std::vector<std::uint8_t>& bits,
                                                double snr_db, FrameRngs& rngs) const {
        const std::size_t M = cfg_.num_subcarriers;
        const std::size_t instants = cfg_.frame_instants;
        const auto grid = detail::bits_to_grid(bits, M, qpsk_columns());
        const auto [ant0, ant1] = gr2_encode(oqam_stagger(grid));

        auto h0 = draw_taps(rngs.fading);
        auto h1 = draw_taps(rngs.fading);
        const std::size_t span = std::max(h0.size(), h1.size());
        h0.resize(span, cplx(0.0, 0.0));  // equal lengths give both branches one
        h1.resize(span, cplx(0.0, 0.0));  // common group delay
        const auto p0 = tr_prefilter(estimate_taps(h0, rngs.estimate));
        const auto p1 = tr_prefilter(estimate_taps(h1, rngs.estimate));
        const double alpha = antenna_scale();

        auto tx0 = apply_channel(oqam_->synthesize(ant0), p0);
        auto tx1 = apply_channel(oqam_->synthesize(ant1), p1);
        for (cplx& v : tx0) v *= alpha;
        for (cplx& v : tx1) v *= alpha;
        const double tx_energy = signal_energy(tx0) + signal_energy(tx1);

        const auto rx0 = apply_channel(tx0, h0);
        const auto rx1 = apply_channel(tx1, h1);
        std::vector<cplx> rx(std::max(rx0.size(), rx1.size()), cplx(0.0, 0.0));
        for (std::size_t k = 0; k < rx0.size(); ++k) rx[k] += rx0[k];
        for (std::size_t k = 0; k < rx1.size(); ++k) rx[k] += rx1[k];
        add_awgn(rx, noise_variance(tx_energy, snr_db), rngs.noise);

        const std::size_t delay = span - 1;  // cascade group delay, samples
        std::vector<cplx> aligned(rx.begin() + static_cast<long>(delay), rx.end());
        const auto demod = oqam_->analyze(aligned, instants);

        const auto eq0 = equivalent_channel(h0, p0, M);
        const auto eq1 = equivalent_channel(h1, p1, M);
        std::vector<double> g0(M), g1(M);
        for (std::size_t m = 0; m < M; ++m) {
            g0[m] = alpha * eq0.freq_response[m];
            g1[m] = alpha * eq1.freq_response[m];
        }
        const auto decoded = gr2_decode(demod, g0, g1);
        RealSymbolGrid reals(M, instants);
        for (std::size_t n = 0; n < instants; ++n)
            for (std::size_t m = 0; m < M; ++m) reals.at(m, n) = decoded.at(m, n).real();
        return detail::grid_to_bits(oqam_destagger(reals));
    }

    std::vector<std::uint8_t> run_alamouti_cpofdm(const std::vector<std::uint8_t>& bits,
                                                  double snr_db, FrameRngs& rngs) const {
        const std::size_t M = cfg_.num_subcarriers;
        const std::size_t cols = qpsk_columns();
        const auto grid = detail::bits_to_grid(bits, M, cols);
        const auto [ant0, ant1] = gr2_encode(grid);

        auto h0 = draw_taps(rngs.fading);
        auto h1 = draw_taps(rngs.fading);
        const std::size_t span = std::max(h0.size(), h1.size());
        h0.resize(span, cplx(0.0, 0.0));
        h1.resize(span, cplx(0.0, 0.0));
        const auto p0 = tr_prefilter(estimate_taps(h0, rngs.estimate));
        const auto p1 = tr_prefilter(estimate_taps(h1, rngs.estimate));
        const double alpha = antenna_scale();

        auto tx0 = apply_channel(cpofdm_->modulate(ant0), p0);
        auto tx1 = apply_channel(cpofdm_->modulate(ant1), p1);
        for (cplx& v : tx0) v *= alpha;
        for (cplx& v : tx1) v *= alpha;
        const double tx_energy = signal_energy(tx0) + signal_energy(tx1);

        const auto rx0 = apply_channel(tx0, h0);
        const auto rx1 = apply_channel(tx1, h1);
        std::vector<cplx> rx(std::max(rx0.size(), rx1.size()), cplx(0.0, 0.0));
        for (std::size_t k = 0; k < rx0.size(); ++k) rx[k] += rx0[k];
        for (std::size_t k = 0; k < rx1.size(); ++k) rx[k] += rx1[k];
        add_awgn(rx, noise_variance(tx_energy, snr_db), rngs.noise);

        // The cascades are centred on a common group delay; spin it out of
        // every subcarrier so the equivalent gains are purely real.
        const std::size_t delay = span - 1;
        auto demod = cpofdm_->demodulate(rx, cols);
        for (std::size_t m = 0; m < M; ++m) {
            const double ang = 2.0 * pi * static_cast<double>(m) * static_cast<double>(delay) /
                               static_cast<double>(M);
            const cplx rot(std::cos(ang), std::sin(ang));
            for (std::size_t n = 0; n < cols; ++n) demod.at(m, n) *= rot;
        }

        const auto eq0 = equivalent_channel(h0, p0, M);
        const auto eq1 = equivalent_channel(h1, p1, M);
        std::vector<double> g0(M), g1(M);
        for (std::size_t m = 0; m < M; ++m) {
            g0[m] = alpha * eq0.freq_response[m];
            g1[m] = alpha * eq1.freq_response[m];
        }
        return detail::grid_to_bits(gr2_decode(demod, g0, g1));
    }

    SimConfig cfg_;
    std::optional<OqamModem> oqam_;
    std::optional<CpOfdmModem> cpofdm_;
};

// Convenience wrapper for one-off frames.
inline FrameResult run_frame(const SimConfig& cfg, std::uint64_t frame_seed, double snr_db) {
    return FrameRunner(cfg).run(frame_seed, snr_db);
}

/*
 * Full sweep.  The frame count per point is fixed up front from the per-frame
 * payload, so the schedule (and every output byte) is independent of the
 * worker count; workers claim frame indices from an atomic counter and
 * accumulate locally, and the final sums are order-independent integers.
 */
inline std::vector<BerRecord> run_sweep(const SimConfig& cfg, unsigned workers = 1) {
    if (workers == 0) throw ConfigError("worker count must be positive");
    const FrameRunner runner(cfg);
    const std::uint64_t per_frame = runner.bits_per_frame();
    std::vector<double> snrs = cfg.snr_db;
    std::sort(snrs.begin(), snrs.end());

    std::vector<BerRecord> records;
    for (std::size_t snr_index = 0; snr_index < snrs.size(); ++snr_index) {
        const double snr = snrs[snr_index];
        std::uint64_t frames_needed = (cfg.min_bits + per_frame - 1) / per_frame;
        bool truncated = false;
        if (frames_needed > cfg.max_frames) {
            frames_needed = cfg.max_frames;
            truncated = true;
        }

        std::atomic<std::uint64_t> next_frame{0};
        std::vector<FrameResult> partials(workers);
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&](unsigned w) {
            try {
                FrameResult local;
                for (std::uint64_t f = next_frame.fetch_add(1); f < frames_needed;
                     f = next_frame.fetch_add(1)) {
                    const std::uint64_t seed =
                        seed_combine(cfg.master_seed, snr_index, f);
                    const FrameResult r = runner.run(seed, snr);
                    local.bits += r.bits;
                    local.bit_errors += r.bit_errors;
                }
                partials[w] = local;
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        };
        if (workers == 1) {
            work(0);
        } else {
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (auto& t : pool) t.join();
        }
        if (failure) std::rethrow_exception(failure);

        BerRecord rec;
        rec.scheme = to_string(cfg.scheme);
        rec.filter = cfg.uses_oqam() ? to_string(cfg.filter) : "none";
        rec.snr_db = snr;
        rec.frames = frames_needed;
        for (const FrameResult& p : partials) {
            rec.bits += p.bits;
            rec.bit_errors += p.bit_errors;
        }
        rec.ber = rec.bits == 0 ? 0.0
                                : static_cast<double>(rec.bit_errors) /
                                      static_cast<double>(rec.bits);
        rec.seed = cfg.master_seed;
        rec.truncated = truncated;
        records.push_back(std::move(rec));
    }
    return records;
}

// ---------------------------------------------------------------------------
// CSV emission and parsing
// ---------------------------------------------------------------------------

inline constexpr const char* csv_header = "scheme,filter,snr_db,frames,bits,bit_errors,ber,seed";

inline std::string emit_csv(const std::vector<BerRecord>& records) {
    std::string out = csv_header;
    out += '\n';
    char buf[256];
    for (const BerRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.10g,%llu,%llu,%llu,%.6g,%llu\n",
                      r.scheme.c_str(), r.filter.c_str(), r.snr_db,
                      static_cast<unsigned long long>(r.frames),
                      static_cast<unsigned long long>(r.bits),
                      static_cast<unsigned long long>(r.bit_errors), r.ber,
                      static_cast<unsigned long long>(r.seed));
        out += buf;
    }
    return out;
}

inline std::vector<BerRecord> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_header)
        throw IoError("missing or unexpected results header");
    std::vector<BerRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 8) throw IoError("malformed results row '" + line + "'");
        BerRecord r;
        r.scheme = fields[0];
        r.filter = fields[1];
        r.snr_db = std::stod(fields[2]);
        r.frames = std::stoull(fields[3]);
        r.bits = std::stoull(fields[4]);
        r.bit_errors = std::stoull(fields[5]);
        // The printed ratio is rounded; rebuild it from the exact counts.
        r.ber = r.bits == 0 ? 0.0
                            : static_cast<double>(r.bit_errors) / static_cast<double>(r.bits);
        r.seed = std::stoull(fields[7]);
        records.push_back(std::move(r));
    }
    return records;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed while writing '" + path + "'");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------
// Configuration files: flat key = value lines, arrays in brackets, # comments
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<double> parse_double_array(const std::string& raw, const std::string& key) {
    std::string v = trim(raw);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ConfigError("key '" + key + "' expects a bracketed array");
    v = v.substr(1, v.size() - 2);
    std::vector<double> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) throw ConfigError("empty element in array for key '" + key + "'");
        try {
            std::size_t used = 0;
            out.push_back(std::stod(t, &used));
            if (used != t.size()) throw std::invalid_argument(t);
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + t + "' for key '" + key + "'");
        }
    }
    return out;
}

inline double parse_double(const std::string& raw, const std::string& key) {
    const std::string t = trim(raw);
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + t + "' for key '" + key + "'");
    }
}

inline std::uint64_t parse_unsigned(const std::string& raw, const std::string& key) {
    const std::string t = trim(raw);
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer '" + t + "' for key '" + key + "'");
    }
}

}  // namespace detail

inline SimConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + " is not 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + " has an empty key or value");
        if (!kv.emplace(key, value).second)
            throw ConfigError("duplicate key '" + key + "'");
    }

    SimConfig cfg;
    bool have_scheme = false, have_snr = false;
    for (const auto& [key, value] : kv) {
        if (key == "scheme") {
            cfg.scheme = scheme_from_string(value);
            have_scheme = true;
        } else if (key == "filter") {
            cfg.filter = filter_name_from_string(value);
        } else if (key == "num_subcarriers") {
            cfg.num_subcarriers = detail::parse_unsigned(value, key);
        } else if (key == "cp_len") {
            cfg.cp_len = detail::parse_unsigned(value, key);
        } else if (key == "frame_instants") {
            cfg.frame_instants = detail::parse_unsigned(value, key);
        } else if (key == "delays_us") {
            cfg.profile.delays_us = detail::parse_double_array(value, key);
        } else if (key == "powers_db") {
            cfg.profile.powers_db = detail::parse_double_array(value, key);
        } else if (key == "sample_rate_hz") {
            cfg.sample_rate_hz = detail::parse_double(value, key);
        } else if (key == "snr_db") {
            cfg.snr_db = detail::parse_double_array(value, key);
            have_snr = true;
        } else if (key == "min_bits") {
            cfg.min_bits = detail::parse_unsigned(value, key);
        } else if (key == "max_frames") {
            cfg.max_frames = detail::parse_unsigned(value, key);
        } else if (key == "master_seed") {
            cfg.master_seed = detail::parse_unsigned(value, key);
        } else if (key == "equalizer") {
            cfg.equalizer = equalizer_from_string(value);
        } else if (key == "delay_mode") {
            cfg.delay_mode = delay_rounding_from_string(value);
        } else if (key == "channel") {
            if (value == "rayleigh") cfg.channel = ChannelModel::rayleigh;
            else if (value == "awgn") cfg.channel = ChannelModel::awgn;
            else throw ConfigError("unknown channel model '" + value + "'");
        } else if (key == "miso_power") {
            if (value == "total") cfg.miso_power = MisoPower::total;
            else if (value == "per_antenna") cfg.miso_power = MisoPower::per_antenna;
            else throw ConfigError("unknown power accounting '" + value + "'");
        } else if (key == "estimation_noise_db") {
            cfg.estimation_noise_db = detail::parse_double(value, key);
        } else if (key == "filter_file") {
            cfg.filter_file = value;
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    if (!have_scheme) throw ConfigError("config must set 'scheme'");
    if (!have_snr) throw ConfigError("config must set 'snr_db'");
    cfg.validate();
    return cfg;
}

inline SimConfig load_config(const std::string& path) {
    return parse_config(read_text_file(path));
}

}  // namespace mcphy
