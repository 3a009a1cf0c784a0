#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace icilab {

using cd = std::complex<double>;

// K x T time-frequency grid (subcarrier k, OFDM symbol t).
// Storage is symbol-major: entry (k, t) lives at data[t * K + k], so one
// OFDM symbol occupies a contiguous block of K values.
struct ComplexGrid {
    int K = 0;
    int T = 0;
    std::vector<cd> data;

    ComplexGrid() = default;
    ComplexGrid(int k, int t) : K(k), T(t), data(static_cast<std::size_t>(k) * t) {}

    cd& at(int k, int t) { return data[static_cast<std::size_t>(t) * K + k]; }
    const cd& at(int k, int t) const { return data[static_cast<std::size_t>(t) * K + k]; }

    cd* symbol(int t) { return data.data() + static_cast<std::size_t>(t) * K; }
    const cd* symbol(int t) const { return data.data() + static_cast<std::size_t>(t) * K; }

    std::size_t size() const { return data.size(); }

    bool same_shape(const ComplexGrid& o) const { return K == o.K && T == o.T; }
};

// mean over all grid entries of |a - b|^2
inline double grid_mse(const ComplexGrid& a, const ComplexGrid& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("grid_mse: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) acc += std::norm(a.data[i] - b.data[i]);
    return acc / static_cast<double>(a.data.size());
}

inline double grid_max_abs_diff(const ComplexGrid& a, const ComplexGrid& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("grid_max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

}  // namespace icilab
