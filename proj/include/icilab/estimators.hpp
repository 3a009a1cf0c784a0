#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "icilab/complex_grid.hpp"
#include "icilab/linalg.hpp"
#include "icilab/ofdm_channel.hpp"

namespace icilab {

// Raw LS ratios at the pilot positions, aligned with the pattern layout
// (entry [a * T_p + b] belongs to pilot subcarrier a, pilot symbol b).
struct PilotEstimates {
    std::vector<cd> values;
};

// Y / pilot at every pilot position. Throws if any pilot value is
// (numerically) zero; the constellation excludes 0 by construction.
PilotEstimates ls_at_pilots(const ComplexGrid& rx, const PilotPattern& pattern);

// Full-grid initial estimate from the pilot samples: 1D linear interpolation
// along frequency within each pilot symbol (edge hold outside the outermost
// pilot subcarriers), then 1D linear interpolation along time per subcarrier
// (edge hold outside the pilot-symbol span). Real and imaginary parts are
// interpolated independently; pilot positions keep their raw LS values.
ComplexGrid interpolate_grid(const PilotEstimates& est, const PilotPattern& pattern, int k, int t);

struct SymbolDecisions {
    ComplexGrid symbols;
    // positions where |H_hat| fell below the usable threshold and the
    // decision degenerated to the tie-break value
    std::vector<std::pair<int, int>> degraded;
};

// Single-tap equalization with hard decisions: at data positions the nearest
// alphabet point to Y/H_hat (ties to the lowest alphabet index), at pilot
// positions the known pilot symbol.
SymbolDecisions equalize_hard(const ComplexGrid& rx, const ComplexGrid& h_hat,
                              const PilotPattern& pattern);

// Empirical second-order statistics of the true channel over the grid and at
// the pilot positions, estimated from independent realizations of a channel
// model. r_hp is (K*T) x P, r_pp is P x P, with P the pilot count and grid
// entries flattened symbol-major (t * K + k).
struct ChannelStats {
    int grid_k = 0;
    int grid_t = 0;
    CMat r_hp;
    CMat r_pp;
};

ChannelStats estimate_channel_stats(const SystemConfig& config, const DelayProfile& profile,
                                    double doppler_max_hz, int num_sinusoids,
                                    const PilotPattern& pattern, int num_realizations,
                                    std::uint64_t seed);

// LMMSE interpolation of the pilot LS estimates to the full grid:
//   H = R_hp (R_pp + noise_var I)^-1 h_p
// solved by Cholesky with 1e-10 diagonal loading. Unit-energy pilots are
// assumed, so the noise term is a plain scaled identity.
ComplexGrid lmmse_estimate(const PilotEstimates& est, const ChannelStats& stats, double noise_var);

}  // namespace icilab
