#include <doctest.h>

#include <cmath>

#include "icilab/dft.hpp"
#include "icilab/ofdm_channel.hpp"
#include "test_support.hpp"

using namespace icilab;

namespace {

// realization with externally chosen constant tap gains
ChannelRealization fixed_gain_realization(const SystemConfig& cfg, std::vector<int> delays,
                                          std::vector<cd> gains) {
    ChannelRealization ch;
    ch.profile.tap_delays = std::move(delays);
    ch.profile.tap_powers.assign(ch.profile.tap_delays.size(),
                                 1.0 / ch.profile.tap_delays.size());
    ch.gains.taps.resize(gains.size());
    for (std::size_t j = 0; j < gains.size(); ++j)
        ch.gains.taps[j].assign(static_cast<std::size_t>(cfg.subframe_samples()), gains[j]);
    ch.true_cfr = ComplexGrid(cfg.subcarriers, cfg.symbols_per_subframe);
    return ch;
}

SystemConfig small_config(int k, int t, int cp = 8) {
    SystemConfig cfg;
    cfg.subcarriers = k;
    cfg.symbols_per_subframe = t;
    cfg.cp_len = cp;
    return cfg;
}

}  // namespace

TEST_SUITE("ofdm_channel") {

TEST_CASE("fading: zero doppler freezes every tap") {
    SystemConfig cfg = small_config(16, 2);
    DelayProfile profile = DelayProfile::linear_attenuation(3);
    FadingSpec spec;
    spec.doppler_max_hz = 0.0;
    spec.seed = 7;
    const TapGainSequences g = generate_fading(spec, profile, cfg, 500);
    REQUIRE(g.num_taps() == 3);
    for (const auto& tap : g.taps)
        for (const cd& v : tap) CHECK(std::abs(v - tap[0]) == 0.0);
}

TEST_CASE("fading: single-tap mean power close to 1 over 1e5 samples") {
    SystemConfig cfg = small_config(128, 14);
    DelayProfile profile = DelayProfile::linear_attenuation(1);
    FadingSpec spec;
    spec.doppler_max_hz = 926.0;
    spec.seed = 11;
    const int n = 100000;
    const TapGainSequences g = generate_fading(spec, profile, cfg, n);
    double power = 0.0;
    for (const cd& v : g.taps[0]) power += std::norm(v);
    power /= n;
    CHECK(power > 0.95);
    CHECK(power < 1.05);
}

TEST_CASE("fading: ensemble autocorrelation follows the bessel curve at the documented lags") {
    SystemConfig cfg = small_config(128, 14);
    DelayProfile profile = DelayProfile::linear_attenuation(1);
    const double fd = 926.0;
    const int half_lag = static_cast<int>(std::lround(cfg.sample_rate_hz() / (2.0 * fd)));
    const int lags[] = {0, half_lag / 2, half_lag};  // 0, 1/(4 fd), 1/(2 fd)
    const int t0_count = 6, t0_spacing = 512;
    const int duration = half_lag + t0_count * t0_spacing + 1;

    cd corr[3] = {};
    double power = 0.0;
    for (int seed = 0; seed < 500; ++seed) {
        FadingSpec spec;
        spec.doppler_max_hz = fd;
        spec.seed = 1000 + seed;
        const TapGainSequences g = generate_fading(spec, profile, cfg, duration);
        for (int i = 0; i < t0_count; ++i) {
            const int t0 = i * t0_spacing;
            for (int l = 0; l < 3; ++l)
                corr[l] += g.taps[0][t0] * std::conj(g.taps[0][t0 + lags[l]]);
            power += std::norm(g.taps[0][t0]);
        }
    }
    CHECK(std::cyl_bessel_j(0.0, 2.0 * M_PI * fd * lags[2] / cfg.sample_rate_hz()) ==
          doctest::Approx(std::cyl_bessel_j(0.0, M_PI)).epsilon(0.01));
    for (int l = 0; l < 3; ++l) {
        const double expected =
            std::cyl_bessel_j(0.0, 2.0 * M_PI * fd * lags[l] / cfg.sample_rate_hz());
        CHECK(std::abs(corr[l].real() / power - expected) < 0.05);
    }
}

TEST_CASE("fading: deterministic per seed, invalid duration rejected") {
    SystemConfig cfg = small_config(16, 2);
    DelayProfile profile = DelayProfile::linear_attenuation(2);
    FadingSpec spec;
    spec.doppler_max_hz = 300.0;
    spec.seed = 42;
    const TapGainSequences a = generate_fading(spec, profile, cfg, 100);
    const TapGainSequences b = generate_fading(spec, profile, cfg, 100);
    CHECK(a.taps == b.taps);
    CHECK_THROWS_AS(generate_fading(spec, profile, cfg, 0), std::invalid_argument);
}

TEST_CASE("delay profiles: linear attenuation spans 20 dB and sums to 1") {
    const DelayProfile p = DelayProfile::linear_attenuation(5);
    REQUIRE(p.num_taps() == 5);
    CHECK(p.tap_delays == std::vector<int>{0, 1, 2, 3, 4});
    double sum = 0.0;
    for (double w : p.tap_powers) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.tap_powers.front() / p.tap_powers.back() == doctest::Approx(100.0));  // 20 dB
    p.validate(16);
}

TEST_CASE("delay profiles: eva snaps to the sample grid and keeps unit power") {
    const DelayProfile p = DelayProfile::eva(1.92e6);
    // nine nominal taps merge to five distinct sample delays at 1.92 MHz
    CHECK(p.tap_delays == std::vector<int>{0, 1, 2, 3, 5});
    double sum = 0.0;
    for (double w : p.tap_powers) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.tap_powers[0] > p.tap_powers[1]);
    p.validate(16);
}

TEST_CASE("cir matrix: banded layout matches the hand example") {
    SystemConfig cfg = small_config(4, 1, 2);
    const ChannelRealization ch = fixed_gain_realization(cfg, {0, 1}, {cd(1, 0), cd(0.5, 0)});
    const CMat g = build_cir_matrix(ch, 0, cfg);
    CHECK(g.at(0, 0) == cd(1, 0));
    CHECK(g.at(0, 1) == cd(0, 0));
    CHECK(g.at(0, 2) == cd(0, 0));
    CHECK(g.at(0, 3) == cd(0.5, 0));
    // time-invariant taps: every row is a cyclic shift of row 0
    for (int r = 1; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(g.at(r, c) == g.at(0, ((c - r) % 4 + 4) % 4));
}

TEST_CASE("cir matrix: single unit tap gives the identity; bad symbol index throws") {
    SystemConfig cfg = small_config(8, 2, 4);
    const ChannelRealization ch = fixed_gain_realization(cfg, {0}, {cd(1, 0)});
    const CMat g = build_cir_matrix(ch, 1, cfg);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) CHECK(g.at(r, c) == (r == c ? cd(1, 0) : cd(0, 0)));
    CHECK_THROWS_AS(build_cir_matrix(ch, 2, cfg), std::out_of_range);
    CHECK_THROWS_AS(build_cir_matrix(ch, -1, cfg), std::out_of_range);
}

TEST_CASE("cir matrix: every row has exactly one entry per tap") {
    SystemConfig cfg = small_config(16, 3);
    FadingSpec spec;
    spec.doppler_max_hz = 1000.0;
    spec.seed = 5;
    for (int n_taps : {1, 3, 5}) {
        const ChannelRealization ch =
            realize_channel(cfg, DelayProfile::linear_attenuation(n_taps), spec);
        const CMat g = build_cir_matrix(ch, 1, cfg);
        for (int r = 0; r < g.rows; ++r) {
            int nonzeros = 0;
            for (int c = 0; c < g.cols; ++c)
                if (g.at(r, c) != cd(0, 0)) ++nonzeros;
            CHECK(nonzeros == n_taps);
        }
    }
}

TEST_CASE("cfr: identity in, identity out; closed-form diagonal for two static taps") {
    SystemConfig cfg = small_config(4, 1, 2);
    CMat eye(4, 4);
    for (int i = 0; i < 4; ++i) eye.at(i, i) = cd(1, 0);
    const CMat h_eye = cfr_from_cir(eye);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(std::abs(h_eye.at(r, c) - (r == c ? cd(1, 0) : cd(0, 0))) < 1e-12);

    const ChannelRealization ch = fixed_gain_realization(cfg, {0, 1}, {cd(1, 0), cd(0.5, 0)});
    const CMat h = cfr_from_cir(build_cir_matrix(ch, 0, cfg));
    for (int k = 0; k < 4; ++k) {
        const cd expect = cd(1, 0) + 0.5 * std::exp(cd(0, -2.0 * M_PI * k / 4.0));
        CHECK(std::abs(h.at(k, k) - expect) < 1e-12);
        for (int m = 0; m < 4; ++m)
            if (m != k) CHECK(std::abs(h.at(k, m)) < 1e-12);
    }
}

TEST_CASE("cfr: unitary similarity preserves the frobenius norm") {
    SystemConfig cfg = small_config(16, 2);
    FadingSpec spec;
    spec.doppler_max_hz = 2000.0;
    spec.seed = 9;
    const ChannelRealization ch =
        realize_channel(cfg, DelayProfile::linear_attenuation(4), spec);
    const CMat g = build_cir_matrix(ch, 0, cfg);
    const CMat h = cfr_from_cir(g);
    CHECK(std::abs(frob_norm(h) - frob_norm(g)) < 1e-9);
}

TEST_CASE("cfr: zero doppler diagonalizes every symbol") {
    SystemConfig cfg = small_config(64, 3);
    FadingSpec spec;
    spec.doppler_max_hz = 0.0;
    spec.seed = 3;
    const ChannelRealization ch =
        realize_channel(cfg, DelayProfile::linear_attenuation(5), spec);
    for (int t = 0; t < cfg.symbols_per_subframe; ++t) {
        const CMat h = cfr_from_cir(build_cir_matrix(ch, t, cfg));
        for (int r = 0; r < h.rows; ++r)
            for (int c = 0; c < h.cols; ++c)
                if (r != c) CHECK(std::abs(h.at(r, c)) < 1e-10);
    }
}

TEST_CASE("true cfr grid equals the diagonal of the full cfr matrix") {
    SystemConfig cfg = small_config(16, 4);
    FadingSpec spec;
    spec.doppler_max_hz = 1500.0;
    spec.seed = 21;
    const ChannelRealization ch =
        realize_channel(cfg, DelayProfile::linear_attenuation(3), spec);
    for (int t = 0; t < cfg.symbols_per_subframe; ++t) {
        const CMat h = cfr_from_cir(build_cir_matrix(ch, t, cfg));
        for (int k = 0; k < cfg.subcarriers; ++k)
            CHECK(std::abs(h.at(k, k) - ch.true_cfr.at(k, t)) < 1e-9);
    }
}

TEST_CASE("apply_channel: identity channel with no noise returns the input") {
    SystemConfig cfg = small_config(8, 3, 4);
    const ChannelRealization ch = fixed_gain_realization(cfg, {0}, {cd(1, 0)});
    ComplexGrid x(8, 3);
    Rng rng(17);
    for (cd& v : x.data) v = rng.cgauss();
    Rng noise(1);
    const ComplexGrid y = apply_channel(x, ch, 0.0, cfg, noise);
    CHECK(grid_max_abs_diff(x, y) < 1e-12);
}

TEST_CASE("apply_channel: agrees with the per-symbol cfr matrix product") {
    SystemConfig cfg = small_config(8, 2, 6);
    FadingSpec spec;
    spec.doppler_max_hz = 3000.0;
    spec.seed = 13;
    const ChannelRealization ch =
        realize_channel(cfg, DelayProfile::linear_attenuation(3), spec);
    ComplexGrid x(8, 2);
    Rng rng(4);
    for (cd& v : x.data) v = rng.cgauss();
    Rng noise(1);
    const ComplexGrid y = apply_channel(x, ch, 0.0, cfg, noise);
    for (int t = 0; t < 2; ++t) {
        const CMat h = cfr_from_cir(build_cir_matrix(ch, t, cfg));
        for (int k = 0; k < 8; ++k) {
            cd acc(0.0, 0.0);
            for (int m = 0; m < 8; ++m) acc += h.at(k, m) * x.at(m, t);
            CHECK(std::abs(acc - y.at(k, t)) < 1e-9);
        }
    }
}

TEST_CASE("apply_channel: matches the time-domain convolution oracle") {
    Rng pick(123);
    for (int trial = 0; trial < 6; ++trial) {
        const int k = std::vector<int>{8, 16, 64}[pick.u64() % 3];
        SystemConfig cfg = small_config(k, 3, 8);
        const int n_taps = 1 + static_cast<int>(pick.u64() % 5);
        FadingSpec spec;
        spec.doppler_max_hz = pick.uniform(0.0, 0.1) * cfg.subcarrier_spacing_hz;
        spec.seed = pick.u64();
        const ChannelRealization ch =
            realize_channel(cfg, DelayProfile::linear_attenuation(n_taps), spec);
        ComplexGrid x(k, 3);
        for (cd& v : x.data) v = pick.cgauss();
        Rng noise(1);
        const ComplexGrid y = apply_channel(x, ch, 0.0, cfg, noise);
        const ComplexGrid oracle = test::time_domain_channel_oracle(x, ch, cfg);
        CHECK(grid_max_abs_diff(y, oracle) < 1e-9);
    }
}

TEST_CASE("apply_channel: empirical noise variance tracks the requested value") {
    SystemConfig cfg = small_config(8, 2, 4);
    const ChannelRealization ch = fixed_gain_realization(cfg, {0}, {cd(1, 0)});
    ComplexGrid x(8, 2);
    Rng rng(3);
    for (cd& v : x.data) v = rng.cgauss();
    Rng noise(99);
    const ComplexGrid y0 = apply_channel(x, ch, 0.0, cfg, noise);
    double acc = 0.0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        const ComplexGrid y = apply_channel(x, ch, 0.1, cfg, noise);
        for (std::size_t j = 0; j < y.data.size(); ++j) acc += std::norm(y.data[j] - y0.data[j]);
    }
    const double var = acc / (trials * static_cast<double>(x.size()));
    CHECK(var > 0.095);
    CHECK(var < 0.105);
}

TEST_CASE("apply_channel: shape mismatch is rejected") {
    SystemConfig cfg = small_config(8, 2, 4);
    const ChannelRealization ch = fixed_gain_realization(cfg, {0}, {cd(1, 0)});
    ComplexGrid x(4, 2);
    Rng noise(1);
    CHECK_THROWS_AS(apply_channel(x, ch, 0.0, cfg, noise), std::invalid_argument);
}

TEST_CASE("pilot patterns: preset layouts") {
    SystemConfig cfg;  // K=128, T=14
    const PilotPattern p84 = make_pilot_pattern(PilotPreset::P84, cfg, 1);
    CHECK(p84.num_pilots() == 84);
    CHECK(p84.num_pilot_subcarriers() == 21);
    CHECK(p84.num_pilot_symbols() == 4);
    CHECK(p84.subcarrier_idx.front() == 0);
    CHECK(p84.subcarrier_idx.back() == 120);
    CHECK(p84.subcarrier_idx[1] - p84.subcarrier_idx[0] == 6);
    CHECK(p84.symbol_idx == std::vector<int>{1, 5, 9, 13});

    const PilotPattern p48 = make_pilot_pattern(PilotPreset::P48, cfg, 1);
    CHECK(p48.num_pilots() == 48);
    CHECK(p48.subcarrier_idx.back() == 120);
    CHECK(p48.subcarrier_idx[1] - p48.subcarrier_idx[0] == 8);
    CHECK(p48.symbol_idx == std::vector<int>{1, 7, 13});

    for (const cd& v : p84.values) CHECK(std::norm(v) == doctest::Approx(1.0).epsilon(1e-12));
    const PilotPattern again = make_pilot_pattern(PilotPreset::P84, cfg, 1);
    CHECK(again.values == p84.values);

    SystemConfig bad = small_config(64, 14);
    CHECK_THROWS_AS(make_pilot_pattern(PilotPreset::P84, bad, 1), std::invalid_argument);
}

TEST_CASE("generate_subframe: snr mapping, determinism, constellation") {
    SystemConfig cfg;
    const PilotPattern pattern = make_pilot_pattern(PilotPreset::P84, cfg, 2);
    const DelayProfile profile = DelayProfile::linear_attenuation(4);
    const Subframe a = generate_subframe(cfg, profile, 926.0, 32, pattern, 10.0, 77);
    CHECK(a.noise_var == doctest::Approx(0.1).epsilon(1e-12));

    const Subframe b = generate_subframe(cfg, profile, 926.0, 32, pattern, 10.0, 77);
    CHECK(a.tx.data == b.tx.data);
    CHECK(a.rx.data == b.rx.data);

    const auto& alphabet = qpsk_alphabet();
    for (const cd& v : a.tx.data) {
        CHECK(std::norm(v) == doctest::Approx(1.0).epsilon(1e-12));
        bool in_alphabet = false;
        for (const cd& s : alphabet) in_alphabet = in_alphabet || v == s;
        CHECK(in_alphabet);
    }
    for (int ai = 0; ai < pattern.num_pilot_subcarriers(); ++ai)
        for (int bi = 0; bi < pattern.num_pilot_symbols(); ++bi)
            CHECK(a.tx.at(pattern.subcarrier_idx[ai], pattern.symbol_idx[bi]) ==
                  pattern.value(ai, bi));
}

TEST_CASE("cfr magnitude dump: normalization and static-channel diagonality") {
    SystemConfig cfg = small_config(16, 2);
    FadingSpec spec;
    spec.doppler_max_hz = 0.0;
    spec.seed = 8;
    const ChannelRealization ch =
        realize_channel(cfg, DelayProfile::linear_attenuation(3), spec);
    const std::vector<double> mag = dump_cfr_magnitude(ch, 0, cfg);
    double peak = 0.0;
    for (double v : mag) peak = std::max(peak, v);
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-12));
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c)
            if (r != c) CHECK(mag[r * 16 + c] < 1e-9);
}

TEST_CASE("cfr magnitude dump: interference energy falls off with band distance") {
    SystemConfig cfg = small_config(64, 1);
    const double fd = 0.1 * cfg.subcarrier_spacing_hz;
    std::array<double, 6> band{};  // band[d] = mean squared magnitude at cyclic distance d
    for (int r = 0; r < 100; ++r) {
        FadingSpec spec;
        spec.doppler_max_hz = fd;
        spec.seed = 4000 + r;
        const ChannelRealization ch =
            realize_channel(cfg, DelayProfile::linear_attenuation(3), spec);
        const std::vector<double> mag = dump_cfr_magnitude(ch, 0, cfg);
        for (int d = 1; d <= 5; ++d)
            for (int k = 0; k < 64; ++k) {
                band[d] += mag[k * 64 + ((k - d) % 64 + 64) % 64] * mag[k * 64 + ((k - d) % 64 + 64) % 64];
                band[d] += mag[k * 64 + (k + d) % 64] * mag[k * 64 + (k + d) % 64];
            }
    }
    for (int d = 1; d < 5; ++d) CHECK(band[d] > band[d + 1]);
}

}  // TEST_SUITE
