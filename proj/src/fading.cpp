#include "icilab/fading.hpp"

#include <cmath>
#include <stdexcept>

#include "icilab/complex_grid.hpp"
#include "icilab/rng.hpp"

namespace icilab {

TapGainSequences generate_fading(const FadingSpec& spec, const DelayProfile& profile,
                                 const SystemConfig& config, int duration_samples) {
    spec.validate();
    if (duration_samples <= 0) throw std::invalid_argument("generate_fading: non-positive duration");

    const int m = spec.num_sinusoids;
    const double ts = 1.0 / config.sample_rate_hz();
    const int num_taps = profile.num_taps();

    TapGainSequences out;
    out.taps.resize(num_taps);

    for (int j = 0; j < num_taps; ++j) {
        Rng rng = Rng::from_stream(spec.seed, static_cast<std::uint64_t>(j));
        const double amp = std::sqrt(profile.tap_powers[j] / m);

        // Each sinusoid advances by a fixed per-sample phasor; the running
        // phasors are updated multiplicatively, which keeps the inner loop
        // free of trig calls. Magnitude drift over a subframe is ~1e-13.
        std::vector<cd> cur(m), step(m);
        for (int s = 0; s < m; ++s) {
            const double arrival = rng.uniform(0.0, 2.0 * M_PI);
            const double phase = rng.uniform(0.0, 2.0 * M_PI);
            const double omega = 2.0 * M_PI * spec.doppler_max_hz * std::cos(arrival) * ts;
            cur[s] = cd(std::cos(phase), std::sin(phase));
            step[s] = cd(std::cos(omega), std::sin(omega));
        }

        std::vector<cd>& g = out.taps[j];
        g.resize(duration_samples);
        for (int n = 0; n < duration_samples; ++n) {
            cd sum(0.0, 0.0);
            for (int s = 0; s < m; ++s) {
                sum += cur[s];
                cur[s] *= step[s];
            }
            g[n] = amp * sum;
        }
    }
    return out;
}

}  // namespace icilab
