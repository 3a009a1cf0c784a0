#pragma once

#include <cstdint>
#include <vector>

namespace icilab {

// OFDM numerology. The sample rate is always K * delta_f; a subframe is
// T symbols of K samples each, preceded by cp_len cyclic-prefix samples.
struct SystemConfig {
    int subcarriers = 128;                 // K
    int symbols_per_subframe = 14;         // T
    int cp_len = 16;                       // N_cp, samples
    double subcarrier_spacing_hz = 15e3;   // delta_f
    double carrier_hz = 2e9;

    double sample_rate_hz() const { return subcarriers * subcarrier_spacing_hz; }
    int symbol_stride() const { return subcarriers + cp_len; }
    int subframe_samples() const { return symbols_per_subframe * symbol_stride(); }

    void validate() const;  // throws std::invalid_argument
};

enum class DelayProfileKind { LinearAttenuation, Eva };

// Tapped-delay-line power profile on the sample grid. Delays are integer
// sample offsets (ascending, first always 0); powers are linear and sum to 1.
struct DelayProfile {
    DelayProfileKind kind = DelayProfileKind::LinearAttenuation;
    std::vector<int> tap_delays;
    std::vector<double> tap_powers;

    int num_taps() const { return static_cast<int>(tap_delays.size()); }
    int max_delay() const { return tap_delays.empty() ? 0 : tap_delays.back(); }

    void validate(int cp_len) const;

    // num_taps taps at delays 0..num_taps-1 with powers stepping linearly
    // from 0 dB down to -20 dB, normalized to unit total power.
    static DelayProfile linear_attenuation(int num_taps);

    // 3GPP EVA power-delay profile snapped to the given sample grid:
    // the nine nominal taps are rounded to the nearest sample, taps landing
    // on the same sample are merged by power, the strongest (up to six)
    // survivors are kept and renormalized to unit power.
    static DelayProfile eva(double sample_rate_hz);
};

// Doppler fading process parameters for the sum-of-sinusoids generator.
struct FadingSpec {
    double doppler_max_hz = 0.0;
    int num_sinusoids = 32;
    std::uint64_t seed = 0;

    void validate() const;
};

}  // namespace icilab
