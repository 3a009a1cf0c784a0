#include "icilab/dft.hpp"

#include <cmath>
#include <stdexcept>

namespace icilab {

std::vector<cd> dft_unitary(const std::vector<cd>& in, bool inverse) {
    const int k = static_cast<int>(in.size());
    if (k == 0) throw std::invalid_argument("dft_unitary: empty input");
    const double sign = inverse ? 1.0 : -1.0;
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    std::vector<cd> out(k);
    // Precomputed twiddle table; index (i*n) mod K walks it cyclically.
    std::vector<cd> tw(k);
    for (int n = 0; n < k; ++n) {
        const double ang = sign * 2.0 * M_PI * n / k;
        tw[n] = cd(std::cos(ang), std::sin(ang));
    }
    for (int i = 0; i < k; ++i) {
        cd acc(0.0, 0.0);
        std::size_t idx = 0;
        for (int n = 0; n < k; ++n) {
            acc += in[n] * tw[idx];
            idx += i;
            if (idx >= static_cast<std::size_t>(k)) idx -= k;
        }
        out[i] = acc * scale;
    }
    return out;
}

CMat dft_matrix(int k) {
    if (k <= 0) throw std::invalid_argument("dft_matrix: size must be positive");
    CMat f(k, k);
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            const double ang = -2.0 * M_PI * static_cast<double>(r) * c / k;
            f.at(r, c) = cd(std::cos(ang) * scale, std::sin(ang) * scale);
        }
    return f;
}

}  // namespace icilab
