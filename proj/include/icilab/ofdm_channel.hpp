#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "icilab/complex_grid.hpp"
#include "icilab/fading.hpp"
#include "icilab/linalg.hpp"
#include "icilab/rng.hpp"
#include "icilab/system_config.hpp"

namespace icilab {

// QPSK alphabet with unit average energy. Index order fixes the tie-break of
// hard decisions: ties resolve to the lowest index.
const std::array<cd, 4>& qpsk_alphabet();

enum class PilotPreset { P84, P48 };

// Grid pilot layout: K_p evenly spaced subcarriers on T_p nonconsecutive
// OFDM symbols. All indices are 0-based.
struct PilotPattern {
    std::vector<int> subcarrier_idx;       // ascending, evenly spaced
    std::vector<int> symbol_idx;           // ascending, pairwise gap >= 2
    std::vector<cd> values;                // values[a * T_p + b]: subcarrier a, symbol b

    int num_pilot_subcarriers() const { return static_cast<int>(subcarrier_idx.size()); }
    int num_pilot_symbols() const { return static_cast<int>(symbol_idx.size()); }
    int num_pilots() const { return num_pilot_subcarriers() * num_pilot_symbols(); }

    const cd& value(int a, int b) const { return values[static_cast<std::size_t>(a) * symbol_idx.size() + b]; }
    cd& value(int a, int b) { return values[static_cast<std::size_t>(a) * symbol_idx.size() + b]; }

    bool is_pilot_symbol(int t) const;
    bool is_pilot(int k, int t) const;

    void validate(int grid_k, int grid_t) const;
};

// Preset layouts for the K=128, T=14 grid:
//   P84: 21 subcarriers spaced 6 (0,6,...,120) on symbols {1,5,9,13}
//   P48: 16 subcarriers spaced 8 (0,8,...,120) on symbols {1,7,13}
// Pilot values are seed-deterministic unit-energy QPSK.
PilotPattern make_pilot_pattern(PilotPreset preset, const SystemConfig& config, std::uint64_t seed);

// One doubly selective channel realization covering a whole subframe.
// gains hold g at every sample instant (CP included); the per-symbol CIR
// matrix reads the post-CP instants of its symbol. true_cfr is the K x T grid
// of diagonal CFR entries, i.e. the desired per-subcarrier channel.
struct ChannelRealization {
    DelayProfile profile;
    TapGainSequences gains;
    ComplexGrid true_cfr;

    int num_taps() const { return profile.num_taps(); }
};

ChannelRealization realize_channel(const SystemConfig& config, const DelayProfile& profile,
                                   const FadingSpec& fading);

// Banded per-symbol CIR matrix: row k holds the tap gains at post-CP sample
// instant k of symbol t, tap with delay d in column (k - d) mod K.
CMat build_cir_matrix(const ChannelRealization& ch, int t, const SystemConfig& config);

// CFR matrix H = F G F^H with F the unitary DFT matrix. Preserves the
// Frobenius norm of G.
CMat cfr_from_cir(const CMat& g);

// Frequency-domain channel application: per symbol, Y_t = H^(t) X_t + W_t
// with white circular Gaussian noise of per-entry variance noise_var.
// Computed without forming H^(t) (IDFT, time-varying cyclic tap filter, DFT).
ComplexGrid apply_channel(const ComplexGrid& x, const ChannelRealization& ch, double noise_var,
                          const SystemConfig& config, Rng& noise_rng);

struct Subframe {
    ComplexGrid tx;   // X
    ComplexGrid rx;   // Y
    PilotPattern pattern;
    ChannelRealization channel;
    double noise_var = 0.0;
    double snr_db = 0.0;
};

// Draws a full subframe: uniform QPSK data symbols, pattern pilots, a fresh
// channel realization, and noise at noise_var = 10^(-snr_db/10). Everything
// is a pure function of (config, profile, fading parameters, pattern, seed).
Subframe generate_subframe(const SystemConfig& config, const DelayProfile& profile,
                           double doppler_max_hz, int num_sinusoids, const PilotPattern& pattern,
                           double snr_db, std::uint64_t seed);

// |H^(t)| normalized by its largest entry, row-major K x K.
std::vector<double> dump_cfr_magnitude(const ChannelRealization& ch, int t,
                                       const SystemConfig& config);

// CSV serialization of dump_cfr_magnitude: K rows of K comma-separated floats.
void write_cfr_magnitude_csv(const std::string& path, const std::vector<double>& mag, int k);

}  // namespace icilab
