#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "icilab/ofdm_channel.hpp"

namespace icilab::harness {

// One stored subframe: transmitted grid, received grid, true channel grid.
// Grids are K*T complex floats in symbol-major order (t * K + k).
struct DatasetItem {
    std::vector<std::complex<float>> x, y, h_bar;
};

// On-disk "ICIN" dataset (version 1, little-endian):
//   magic "ICIN" | u32 version | u32 K | u32 T | u32 N
//   pilot descriptor: u32 K_p | u32 T_p | u32 subcarriers[K_p]
//                     | u32 symbols[T_p] | f32 (re,im)[K_p*T_p] | f32 noise_var
//   N subframes, each X then Y then H grids as interleaved f32 (re,im)
struct DatasetFile {
    int grid_k = 0;
    int grid_t = 0;
    PilotPattern pattern;
    float noise_var = 0.0f;
    std::vector<DatasetItem> items;
};

// Writes atomically (temp file + rename). Round-trips are bit-exact.
void write_dataset(const std::string& path, const DatasetFile& ds);
DatasetFile read_dataset(const std::string& path);

ComplexGrid item_grid(const std::vector<std::complex<float>>& v, int k, int t);

}  // namespace icilab::harness
