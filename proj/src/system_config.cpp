#include "icilab/system_config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace icilab {

void SystemConfig::validate() const {
    if (subcarriers < 2) throw std::invalid_argument("SystemConfig: need at least 2 subcarriers");
    if (symbols_per_subframe < 1) throw std::invalid_argument("SystemConfig: need at least 1 symbol");
    if (cp_len < 0) throw std::invalid_argument("SystemConfig: negative CP length");
    if (subcarrier_spacing_hz <= 0.0) throw std::invalid_argument("SystemConfig: non-positive spacing");
}

void DelayProfile::validate(int cp_len) const {
    if (tap_delays.empty() || tap_delays.size() != tap_powers.size())
        throw std::invalid_argument("DelayProfile: delay/power size mismatch");
    if (tap_delays.front() != 0) throw std::invalid_argument("DelayProfile: first delay must be 0");
    for (std::size_t i = 1; i < tap_delays.size(); ++i)
        if (tap_delays[i] <= tap_delays[i - 1])
            throw std::invalid_argument("DelayProfile: delays must be strictly ascending");
    if (max_delay() > cp_len)
        throw std::invalid_argument("DelayProfile: max delay exceeds CP length (ISI-free condition)");
    double s = 0.0;
    for (double p : tap_powers) {
        if (p <= 0.0) throw std::invalid_argument("DelayProfile: non-positive tap power");
        s += p;
    }
    if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("DelayProfile: powers must sum to 1");
}

DelayProfile DelayProfile::linear_attenuation(int num_taps) {
    if (num_taps < 1) throw std::invalid_argument("linear_attenuation: need at least 1 tap");
    DelayProfile p;
    p.kind = DelayProfileKind::LinearAttenuation;
    p.tap_delays.resize(num_taps);
    p.tap_powers.resize(num_taps);
    double total = 0.0;
    for (int j = 0; j < num_taps; ++j) {
        p.tap_delays[j] = j;
        const double db = (num_taps == 1) ? 0.0 : -20.0 * j / (num_taps - 1);
        p.tap_powers[j] = std::pow(10.0, db / 10.0);
        total += p.tap_powers[j];
    }
    for (double& w : p.tap_powers) w /= total;
    return p;
}

DelayProfile DelayProfile::eva(double sample_rate_hz) {
    if (sample_rate_hz <= 0.0) throw std::invalid_argument("eva: non-positive sample rate");
    // 3GPP EVA nominal taps (delay ns, relative power dB)
    static const double delays_ns[] = {0, 30, 150, 310, 370, 710, 1090, 1730, 2510};
    static const double powers_db[] = {0.0, -1.5, -1.4, -3.6, -0.6, -9.1, -7.0, -12.0, -16.9};

    std::map<int, double> merged;  // sample index -> summed linear power
    for (int i = 0; i < 9; ++i) {
        const int s = static_cast<int>(std::lround(delays_ns[i] * 1e-9 * sample_rate_hz));
        merged[s] += std::pow(10.0, powers_db[i] / 10.0);
    }

    std::vector<std::pair<int, double>> taps(merged.begin(), merged.end());
    if (taps.size() > 6) {
        std::sort(taps.begin(), taps.end(),
                  [](const auto& a, const auto& b) { return a.second > b.second; });
        taps.resize(6);
        std::sort(taps.begin(), taps.end());
    }

    DelayProfile p;
    p.kind = DelayProfileKind::Eva;
    double total = 0.0;
    for (const auto& [delay, power] : taps) {
        p.tap_delays.push_back(delay);
        p.tap_powers.push_back(power);
        total += power;
    }
    for (double& w : p.tap_powers) w /= total;
    return p;
}

void FadingSpec::validate() const {
    if (doppler_max_hz < 0.0) throw std::invalid_argument("FadingSpec: negative Doppler");
    if (num_sinusoids < 8) throw std::invalid_argument("FadingSpec: need at least 8 sinusoids");
}

}  // namespace icilab
