#include "icilab/ofdm_channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "icilab/dft.hpp"

namespace icilab {

const std::array<cd, 4>& qpsk_alphabet() {
    // Gray layout over quadrants; first entry (+,+) wins exact ties.
    constexpr double a = 0.70710678118654752440;
    static const std::array<cd, 4> alphabet = {cd(a, a), cd(a, -a), cd(-a, a), cd(-a, -a)};
    return alphabet;
}

bool PilotPattern::is_pilot_symbol(int t) const {
    return std::binary_search(symbol_idx.begin(), symbol_idx.end(), t);
}

bool PilotPattern::is_pilot(int k, int t) const {
    return is_pilot_symbol(t) && std::binary_search(subcarrier_idx.begin(), subcarrier_idx.end(), k);
}

void PilotPattern::validate(int grid_k, int grid_t) const {
    if (subcarrier_idx.empty() || symbol_idx.empty())
        throw std::invalid_argument("PilotPattern: empty pilot set");
    if (values.size() != static_cast<std::size_t>(num_pilots()))
        throw std::invalid_argument("PilotPattern: value count mismatch");
    if (subcarrier_idx.front() < 0 || subcarrier_idx.back() >= grid_k ||
        symbol_idx.front() < 0 || symbol_idx.back() >= grid_t)
        throw std::invalid_argument("PilotPattern: index out of grid");
    if (subcarrier_idx.size() >= 2) {
        const int spacing = subcarrier_idx[1] - subcarrier_idx[0];
        for (std::size_t i = 1; i < subcarrier_idx.size(); ++i)
            if (subcarrier_idx[i] - subcarrier_idx[i - 1] != spacing)
                throw std::invalid_argument("PilotPattern: subcarriers not evenly spaced");
    }
    for (std::size_t i = 1; i < symbol_idx.size(); ++i)
        if (symbol_idx[i] - symbol_idx[i - 1] < 2)
            throw std::invalid_argument("PilotPattern: pilot symbols must be nonconsecutive");
}

PilotPattern make_pilot_pattern(PilotPreset preset, const SystemConfig& config, std::uint64_t seed) {
    if (config.subcarriers != 128 || config.symbols_per_subframe != 14)
        throw std::invalid_argument("make_pilot_pattern: presets require K=128, T=14");

    PilotPattern p;
    const int count = (preset == PilotPreset::P84) ? 21 : 16;
    const int spacing = (preset == PilotPreset::P84) ? 6 : 8;
    for (int a = 0; a < count; ++a) p.subcarrier_idx.push_back(a * spacing);
    p.symbol_idx = (preset == PilotPreset::P84) ? std::vector<int>{1, 5, 9, 13}
                                                : std::vector<int>{1, 7, 13};

    Rng rng = Rng::from_stream(seed, 0xB110);
    const auto& alphabet = qpsk_alphabet();
    p.values.resize(static_cast<std::size_t>(p.num_pilots()));
    for (cd& v : p.values) v = alphabet[rng.u64() & 3];

    p.validate(config.subcarriers, config.symbols_per_subframe);
    return p;
}

ChannelRealization realize_channel(const SystemConfig& config, const DelayProfile& profile,
                                   const FadingSpec& fading) {
    config.validate();
    profile.validate(config.cp_len);

    ChannelRealization ch;
    ch.profile = profile;
    ch.gains = generate_fading(fading, profile, config, config.subframe_samples());

    // Diagonal CFR entries: the DFT at the tap delays of the per-symbol
    // time-averaged gains (average over the K post-CP sample instants).
    const int k_sub = config.subcarriers;
    const int t_num = config.symbols_per_subframe;
    const int n_taps = profile.num_taps();
    ch.true_cfr = ComplexGrid(k_sub, t_num);
    for (int t = 0; t < t_num; ++t) {
        const int base = t * config.symbol_stride() + config.cp_len;
        std::vector<cd> mean_gain(n_taps);
        for (int j = 0; j < n_taps; ++j) {
            cd acc(0.0, 0.0);
            const auto& g = ch.gains.taps[j];
            for (int i = 0; i < k_sub; ++i) acc += g[base + i];
            mean_gain[j] = acc / static_cast<double>(k_sub);
        }
        for (int k = 0; k < k_sub; ++k) {
            cd h(0.0, 0.0);
            for (int j = 0; j < n_taps; ++j) {
                const double ang = -2.0 * M_PI * static_cast<double>(k) * profile.tap_delays[j] / k_sub;
                h += mean_gain[j] * cd(std::cos(ang), std::sin(ang));
            }
            ch.true_cfr.at(k, t) = h;
        }
    }
    return ch;
}

CMat build_cir_matrix(const ChannelRealization& ch, int t, const SystemConfig& config) {
    if (t < 0 || t >= config.symbols_per_subframe)
        throw std::out_of_range("build_cir_matrix: symbol index out of range");
    const int k_sub = config.subcarriers;
    const int base = t * config.symbol_stride() + config.cp_len;

    CMat g(k_sub, k_sub);
    for (int k = 0; k < k_sub; ++k)
        for (int j = 0; j < ch.num_taps(); ++j) {
            const int d = ch.profile.tap_delays[j];
            const int col = ((k - d) % k_sub + k_sub) % k_sub;
            g.at(k, col) = ch.gains.taps[j][base + k];
        }
    return g;
}

CMat cfr_from_cir(const CMat& g) {
    if (g.rows != g.cols) throw std::invalid_argument("cfr_from_cir: matrix not square");
    const CMat f = dft_matrix(g.rows);
    return matmul(matmul(f, g), hermitian(f));
}

ComplexGrid apply_channel(const ComplexGrid& x, const ChannelRealization& ch, double noise_var,
                          const SystemConfig& config, Rng& noise_rng) {
    if (x.K != config.subcarriers || x.T != config.symbols_per_subframe)
        throw std::invalid_argument("apply_channel: grid shape does not match config");
    if (ch.gains.length() < config.subframe_samples())
        throw std::invalid_argument("apply_channel: realization too short for subframe");

    const int k_sub = x.K;
    const int n_taps = ch.num_taps();
    const double noise_amp = std::sqrt(noise_var);

    ComplexGrid y(x.K, x.T);
    std::vector<cd> sym(k_sub), faded(k_sub);
    for (int t = 0; t < x.T; ++t) {
        sym.assign(x.symbol(t), x.symbol(t) + k_sub);
        const std::vector<cd> time = idft_unitary(sym);
        const int base = t * config.symbol_stride() + config.cp_len;
        // Time-varying cyclic tap filter; equals H^(t) X_t exactly because
        // the CP turns the linear convolution into a cyclic one.
        for (int i = 0; i < k_sub; ++i) {
            cd acc(0.0, 0.0);
            for (int j = 0; j < n_taps; ++j) {
                const int d = ch.profile.tap_delays[j];
                const int src = ((i - d) % k_sub + k_sub) % k_sub;
                acc += ch.gains.taps[j][base + i] * time[src];
            }
            faded[i] = acc;
        }
        std::vector<cd> out = dft_unitary(faded);
        for (int k = 0; k < k_sub; ++k) {
            cd w = (noise_var > 0.0) ? noise_amp * noise_rng.cgauss() : cd(0.0, 0.0);
            y.at(k, t) = out[k] + w;
        }
    }
    return y;
}

Subframe generate_subframe(const SystemConfig& config, const DelayProfile& profile,
                           double doppler_max_hz, int num_sinusoids, const PilotPattern& pattern,
                           double snr_db, std::uint64_t seed) {
    config.validate();
    pattern.validate(config.subcarriers, config.symbols_per_subframe);

    Subframe sf;
    sf.pattern = pattern;
    sf.snr_db = snr_db;
    sf.noise_var = std::pow(10.0, -snr_db / 10.0);

    FadingSpec fading;
    fading.doppler_max_hz = doppler_max_hz;
    fading.num_sinusoids = num_sinusoids;
    fading.seed = derive_seed(seed, 1);
    sf.channel = realize_channel(config, profile, fading);

    // Data positions carry uniform QPSK; pilot positions the pattern values.
    Rng data_rng = Rng::from_stream(seed, 2);
    const auto& alphabet = qpsk_alphabet();
    sf.tx = ComplexGrid(config.subcarriers, config.symbols_per_subframe);
    for (int t = 0; t < sf.tx.T; ++t)
        for (int k = 0; k < sf.tx.K; ++k) sf.tx.at(k, t) = alphabet[data_rng.u64() & 3];
    for (int a = 0; a < pattern.num_pilot_subcarriers(); ++a)
        for (int b = 0; b < pattern.num_pilot_symbols(); ++b)
            sf.tx.at(pattern.subcarrier_idx[a], pattern.symbol_idx[b]) = pattern.value(a, b);

    Rng noise_rng = Rng::from_stream(seed, 3);
    sf.rx = apply_channel(sf.tx, sf.channel, sf.noise_var, config, noise_rng);
    return sf;
}

std::vector<double> dump_cfr_magnitude(const ChannelRealization& ch, int t,
                                       const SystemConfig& config) {
    const CMat h = cfr_from_cir(build_cir_matrix(ch, t, config));
    std::vector<double> mag(h.a.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < h.a.size(); ++i) {
        mag[i] = std::abs(h.a[i]);
        peak = std::max(peak, mag[i]);
    }
    if (peak > 0.0)
        for (double& v : mag) v /= peak;
    return mag;
}

void write_cfr_magnitude_csv(const std::string& path, const std::vector<double>& mag, int k) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_cfr_magnitude_csv: cannot open " + path);
    char buf[64];
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
            std::snprintf(buf, sizeof(buf), "%.9g", mag[static_cast<std::size_t>(r) * k + c]);
            out << buf << (c + 1 < k ? "," : "\n");
        }
    }
    if (!out) throw std::runtime_error("write_cfr_magnitude_csv: write failed: " + path);
}

}  // namespace icilab
