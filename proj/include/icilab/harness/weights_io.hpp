#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "icilab/nn/model.hpp"

namespace icilab::harness {

// On-disk "ICIW" checkpoint (version 1, little-endian):
//   magic "ICIW" | u32 version | u32 n_ici | u32 hidden_units | u32 count
//   count tensors, each: u32 name_len | name bytes | u32 rank | u32 dims[rank]
//                        | f32 data[numel]
// The (n_ici, hidden_units) descriptor lets loaders reject checkpoints that
// do not match the requested architecture before touching tensor shapes.
struct WeightsFile {
    std::uint32_t n_ici = 0;
    std::uint32_t hidden_units = 0;
    std::vector<std::pair<std::string, nn::Tensor<float>>> tensors;
};

void write_weights(const std::string& path, const WeightsFile& wf);
WeightsFile read_weights(const std::string& path);

// Appends a model's parameters under "<prefix>.<param name>".
void pack_params(WeightsFile& wf, const std::string& prefix, const nn::ModelParams<float>& params);

// Extracts "<prefix>.*" tensors into params for the given model, validating
// that every expected tensor is present with the expected shape.
nn::ModelParams<float> unpack_params(const WeightsFile& wf, const std::string& prefix,
                                     const nn::Model& model);

}  // namespace icilab::harness
