#pragma once

#include <complex>
#include <vector>

#include "icilab/system_config.hpp"

namespace icilab {

// Sample-rate complex gain sequences, one per tap: taps[j][n] is the gain of
// tap j at sample instant n. Taps are mutually independent processes.
struct TapGainSequences {
    std::vector<std::vector<std::complex<double>>> taps;

    int num_taps() const { return static_cast<int>(taps.size()); }
    int length() const { return taps.empty() ? 0 : static_cast<int>(taps[0].size()); }
};

// Generates Rayleigh-fading tap gains with a Jakes Doppler spectrum using a
// modified sum of sinusoids: per tap, num_sinusoids plane waves with i.i.d.
// uniform arrival angles and phases. Ensemble autocorrelation converges to
// J0(2 pi f_D tau); tap j carries power tap_powers[j]. Fully determined by
// spec.seed. duration_samples must be positive.
TapGainSequences generate_fading(const FadingSpec& spec, const DelayProfile& profile,
                                 const SystemConfig& config, int duration_samples);

}  // namespace icilab
