#pragma once

#include <vector>

#include "icilab/linalg.hpp"

namespace icilab {

// Unitary K-point DFT: out[k] = (1/sqrt(K)) sum_n in[n] e^{-j 2 pi k n / K}.
// The inverse uses the conjugate kernel with the same 1/sqrt(K) scaling, so
// dft(idft(x)) == x and both transforms preserve energy.
std::vector<cd> dft_unitary(const std::vector<cd>& in, bool inverse = false);

inline std::vector<cd> idft_unitary(const std::vector<cd>& in) { return dft_unitary(in, true); }

// Unitary DFT matrix F with F[k][n] = e^{-j 2 pi k n / K} / sqrt(K).
CMat dft_matrix(int k);

}  // namespace icilab
