#include "icilab/estimators.hpp"

#include <cmath>
#include <stdexcept>

#include "icilab/rng.hpp"

namespace icilab {

PilotEstimates ls_at_pilots(const ComplexGrid& rx, const PilotPattern& pattern) {
    pattern.validate(rx.K, rx.T);
    PilotEstimates est;
    est.values.resize(static_cast<std::size_t>(pattern.num_pilots()));
    for (int a = 0; a < pattern.num_pilot_subcarriers(); ++a)
        for (int b = 0; b < pattern.num_pilot_symbols(); ++b) {
            const cd pilot = pattern.value(a, b);
            if (std::abs(pilot) < 1e-12)
                throw std::invalid_argument("ls_at_pilots: zero-magnitude pilot symbol");
            est.values[static_cast<std::size_t>(a) * pattern.num_pilot_symbols() + b] =
                rx.at(pattern.subcarrier_idx[a], pattern.symbol_idx[b]) / pilot;
        }
    return est;
}

namespace {

// 1D linear interpolation of samples (pos[i], val[i]) onto 0..n-1 with
// nearest-edge hold outside the sample span. pos is ascending.
void interp_line(const std::vector<int>& pos, const std::vector<cd>& val, int n, cd* out) {
    const int m = static_cast<int>(pos.size());
    int seg = 0;
    for (int x = 0; x < n; ++x) {
        if (x <= pos.front()) {
            out[x] = val.front();
        } else if (x >= pos.back()) {
            out[x] = val.back();
        } else {
            while (pos[seg + 1] < x) ++seg;
            const double w = static_cast<double>(x - pos[seg]) / (pos[seg + 1] - pos[seg]);
            out[x] = (1.0 - w) * val[seg] + w * val[seg + 1];
        }
    }
}

}  // namespace

ComplexGrid interpolate_grid(const PilotEstimates& est, const PilotPattern& pattern, int k, int t) {
    pattern.validate(k, t);
    const int kp = pattern.num_pilot_subcarriers();
    const int tp = pattern.num_pilot_symbols();
    if (est.values.size() != static_cast<std::size_t>(kp) * tp)
        throw std::invalid_argument("interpolate_grid: estimate/pattern size mismatch");

    // frequency direction, per pilot symbol
    std::vector<std::vector<cd>> cols(tp, std::vector<cd>(k));
    std::vector<cd> samples(kp);
    for (int b = 0; b < tp; ++b) {
        for (int a = 0; a < kp; ++a) samples[a] = est.values[static_cast<std::size_t>(a) * tp + b];
        interp_line(pattern.subcarrier_idx, samples, k, cols[b].data());
    }

    // time direction, per subcarrier
    ComplexGrid h(k, t);
    std::vector<cd> line(tp);
    for (int kk = 0; kk < k; ++kk) {
        for (int b = 0; b < tp; ++b) line[b] = cols[b][kk];
        std::vector<cd> full(t);
        interp_line(pattern.symbol_idx, line, t, full.data());
        for (int tt = 0; tt < t; ++tt) h.at(kk, tt) = full[tt];
    }
    return h;
}

SymbolDecisions equalize_hard(const ComplexGrid& rx, const ComplexGrid& h_hat,
                              const PilotPattern& pattern) {
    if (!rx.same_shape(h_hat)) throw std::invalid_argument("equalize_hard: shape mismatch");
    const auto& alphabet = qpsk_alphabet();

    SymbolDecisions dec;
    dec.symbols = ComplexGrid(rx.K, rx.T);
    for (int t = 0; t < rx.T; ++t) {
        const bool pilot_sym = pattern.is_pilot_symbol(t);
        for (int k = 0; k < rx.K; ++k) {
            if (pilot_sym && pattern.is_pilot(k, t)) continue;  // filled below
            const cd h = h_hat.at(k, t);
            cd eq(0.0, 0.0);
            if (std::abs(h) < 1e-12) {
                dec.degraded.emplace_back(k, t);  // all points tie; lowest index wins
            } else {
                eq = rx.at(k, t) / h;
            }
            int best = 0;
            double best_d = std::norm(eq - alphabet[0]);
            for (int i = 1; i < 4; ++i) {
                const double d = std::norm(eq - alphabet[i]);
                if (d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
            dec.symbols.at(k, t) = alphabet[best];
        }
    }
    for (int a = 0; a < pattern.num_pilot_subcarriers(); ++a)
        for (int b = 0; b < pattern.num_pilot_symbols(); ++b)
            dec.symbols.at(pattern.subcarrier_idx[a], pattern.symbol_idx[b]) = pattern.value(a, b);
    return dec;
}

ChannelStats estimate_channel_stats(const SystemConfig& config, const DelayProfile& profile,
                                    double doppler_max_hz, int num_sinusoids,
                                    const PilotPattern& pattern, int num_realizations,
                                    std::uint64_t seed) {
    if (num_realizations < 1)
        throw std::invalid_argument("estimate_channel_stats: need at least one realization");
    pattern.validate(config.subcarriers, config.symbols_per_subframe);

    const int kp = pattern.num_pilot_subcarriers();
    const int tp = pattern.num_pilot_symbols();
    const int p = kp * tp;
    const int n = config.subcarriers * config.symbols_per_subframe;

    ChannelStats stats;
    stats.grid_k = config.subcarriers;
    stats.grid_t = config.symbols_per_subframe;
    stats.r_hp = CMat(n, p);
    stats.r_pp = CMat(p, p);

    std::vector<cd> hp(p);
    for (int r = 0; r < num_realizations; ++r) {
        FadingSpec fading;
        fading.doppler_max_hz = doppler_max_hz;
        fading.num_sinusoids = num_sinusoids;
        fading.seed = derive_seed(seed, 0xCA11B, static_cast<std::uint64_t>(r));
        const ChannelRealization ch = realize_channel(config, profile, fading);

        for (int a = 0; a < kp; ++a)
            for (int b = 0; b < tp; ++b)
                hp[a * tp + b] = ch.true_cfr.at(pattern.subcarrier_idx[a], pattern.symbol_idx[b]);

        for (int i = 0; i < n; ++i) {
            const cd hi = ch.true_cfr.data[i];
            cd* row = &stats.r_hp.a[static_cast<std::size_t>(i) * p];
            for (int j = 0; j < p; ++j) row[j] += hi * std::conj(hp[j]);
        }
        for (int i = 0; i < p; ++i) {
            cd* row = &stats.r_pp.a[static_cast<std::size_t>(i) * p];
            for (int j = 0; j < p; ++j) row[j] += hp[i] * std::conj(hp[j]);
        }
    }
    const double inv = 1.0 / num_realizations;
    for (cd& v : stats.r_hp.a) v *= inv;
    for (cd& v : stats.r_pp.a) v *= inv;
    return stats;
}

ComplexGrid lmmse_estimate(const PilotEstimates& est, const ChannelStats& stats, double noise_var) {
    const int p = stats.r_pp.rows;
    if (est.values.size() != static_cast<std::size_t>(p))
        throw std::invalid_argument("lmmse_estimate: estimate/stats size mismatch");

    CMat sys = stats.r_pp;
    for (int i = 0; i < p; ++i) sys.at(i, i) += noise_var + 1e-10;

    CMat rhs(p, 1);
    for (int i = 0; i < p; ++i) rhs.at(i, 0) = est.values[i];

    cholesky_inplace(sys);
    cholesky_solve(sys, rhs);

    ComplexGrid out(stats.grid_k, stats.grid_t);
    const int n = stats.grid_k * stats.grid_t;
    for (int i = 0; i < n; ++i) {
        const cd* row = &stats.r_hp.a[static_cast<std::size_t>(i) * p];
        cd acc(0.0, 0.0);
        for (int j = 0; j < p; ++j) acc += row[j] * rhs.at(j, 0);
        out.data[i] = acc;
    }
    return out;
}

}  // namespace icilab
