#pragma once

#include <cstdint>
#include <vector>

#include "icilab/harness/dataset_io.hpp"
#include "icilab/net/icinet.hpp"
#include "icilab/nn/adam.hpp"

namespace icilab::net {

// One subframe prepared for training: received grid, stage-1 hard decisions
// and initial estimate, and the ground-truth channel.
struct TrainSample {
    ComplexGrid y, x_hat, h_hat, h_bar;
};

struct TrainingSet {
    int grid_k = 0;
    int grid_t = 0;
    std::vector<TrainSample> items;

    int size() const { return static_cast<int>(items.size()); }
};

// Runs the stage-1 estimators (LS at pilots, interpolation, hard decisions)
// on every stored subframe.
TrainingSet prepare_training_set(const harness::DatasetFile& ds);

struct TrainConfig {
    int epochs = 100;
    int batch_size = 200;
    double lr = 1e-3;
    std::uint64_t seed = 1;
    PreDnnConfig pre_cfg;
    CasResNetConfig cas_cfg;
};

// Per-epoch loss values; train entries average the minibatch objective over
// the epoch, val entries evaluate the phase objective on the validation set
// after the epoch.
struct LossTrace {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    int updates_per_epoch = 0;  // optimizer steps per epoch (ceil(N / batch))
};

struct Phase1Result {
    nn::ModelParams<float> pre_params;
    LossTrace trace;
    double val_grid_mse = 0.0;  // per-entry grid MSE on the validation set after training
};

// Phase 1 alone: the subcarrier-wise net against the true channel. Uses the
// same streams as train_sequential, so for equal configs the trained
// parameters are bit-identical to a sequential run's first phase.
Phase1Result train_prednn_phase1(const TrainingSet& train, const TrainingSet& val,
                                 const TrainConfig& cfg);

struct SequentialResult {
    nn::ModelParams<float> pre_params;
    nn::ModelParams<float> cas_params;
    LossTrace phase1;  // refinement-net objective
    LossTrace phase2;  // final-estimate objective, refinement net frozen
};

// Two-phase training: first the subcarrier-wise net against the true channel,
// then (with its parameters frozen and its outputs precomputed once) the
// image-refinement net against the true channel.
SequentialResult train_sequential(const TrainingSet& train, const TrainingSet& val,
                                  const TrainConfig& cfg);

struct EndToEndResult {
    nn::ModelParams<float> pre_params;
    nn::ModelParams<float> cas_params;
    LossTrace trace;  // final-estimate objective through the full composition
};

// Joint training of both subnetworks through the composition, same optimizer
// settings and initial parameters as the sequential strategy.
EndToEndResult train_end_to_end(const TrainingSet& train, const TrainingSet& val,
                                const TrainConfig& cfg);

struct CasOnlyResult {
    nn::ModelParams<float> cas_params;
    LossTrace trace;
};

// Image-refinement net trained directly on the stage-1 initial estimates,
// bypassing the subcarrier-wise net.
CasOnlyResult train_casresnet_only(const TrainingSet& train, const TrainingSet& val,
                                   const TrainConfig& cfg);

// Mean per-entry |estimate - truth|^2 of the subcarrier-wise net over a set.
double prednn_grid_mse(const TrainingSet& set, const nn::Model& pre,
                       const nn::ModelParams<float>& pre_params, const PreDnnConfig& cfg);

}  // namespace icilab::net
