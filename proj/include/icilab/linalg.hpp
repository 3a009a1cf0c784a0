#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "icilab/complex_grid.hpp"

namespace icilab {

// Small dense complex matrix, row-major. Sized for per-symbol K x K work
// (K <= a few hundred); nothing here is meant for large-scale linear algebra.
struct CMat {
    int rows = 0;
    int cols = 0;
    std::vector<cd> a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    cd& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const cd& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

inline CMat matmul(const CMat& x, const CMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul: inner dimension mismatch");
    CMat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        cd* zr = &z.a[static_cast<std::size_t>(i) * z.cols];
        for (int k = 0; k < x.cols; ++k) {
            const cd f = x.at(i, k);
            if (f == cd(0.0, 0.0)) continue;
            const cd* yr = &y.a[static_cast<std::size_t>(k) * y.cols];
            for (int j = 0; j < y.cols; ++j) zr[j] += f * yr[j];
        }
    }
    return z;
}

inline CMat hermitian(const CMat& x) {
    CMat z(x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) z.at(j, i) = std::conj(x.at(i, j));
    return z;
}

inline double frob_norm(const CMat& x) {
    double s = 0.0;
    for (const cd& v : x.a) s += std::norm(v);
    return std::sqrt(s);
}

// In-place Cholesky factorization A = L L^H of a Hermitian positive-definite
// matrix; lower triangle of `a` is overwritten with L.
// Throws std::runtime_error when a pivot is not strictly positive.
inline void cholesky_inplace(CMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("cholesky: matrix not square");
    const int n = m.rows;
    for (int j = 0; j < n; ++j) {
        double d = m.at(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(m.at(j, k));
        if (!(d > 0.0)) throw std::runtime_error("cholesky: non-positive pivot (singular system)");
        const double dj = std::sqrt(d);
        m.at(j, j) = dj;
        for (int i = j + 1; i < n; ++i) {
            cd s = m.at(i, j);
            for (int k = 0; k < j; ++k) s -= m.at(i, k) * std::conj(m.at(j, k));
            m.at(i, j) = s / dj;
        }
    }
}

// Solves A x = b for multiple right-hand sides given the Cholesky factor L
// (as produced by cholesky_inplace). b is n x nrhs, overwritten with x.
inline void cholesky_solve(const CMat& l, CMat& b) {
    const int n = l.rows;
    if (b.rows != n) throw std::invalid_argument("cholesky_solve: rhs dimension mismatch");
    // forward: L y = b
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) {
            const cd f = l.at(i, k);
            for (int j = 0; j < b.cols; ++j) b.at(i, j) -= f * b.at(k, j);
        }
        const double d = l.at(i, i).real();
        for (int j = 0; j < b.cols; ++j) b.at(i, j) /= d;
    }
    // backward: L^H x = y
    for (int i = n - 1; i >= 0; --i) {
        for (int k = i + 1; k < n; ++k) {
            const cd f = std::conj(l.at(k, i));
            for (int j = 0; j < b.cols; ++j) b.at(i, j) -= f * b.at(k, j);
        }
        const double d = l.at(i, i).real();
        for (int j = 0; j < b.cols; ++j) b.at(i, j) /= d;
    }
}

}  // namespace icilab
