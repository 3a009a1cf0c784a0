#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "icilab/harness/dataset_io.hpp"
#include "icilab/ofdm_channel.hpp"

namespace icilab::harness {

// Training-side channel model: linear-attenuation profile with a per-subframe
// random tap count and maximum Doppler shift, fixed SNR.
struct TrainChannelSpec {
    int taps_min = 3;
    int taps_max = 9;
    double doppler_min_hz = 800.0;
    double doppler_max_hz = 1200.0;
    double snr_db = 10.0;
};

// Evaluation-side channel model: EVA profile at a fixed maximum Doppler.
struct TestChannelSpec {
    double doppler_hz = 926.0;  // 500 km/h at a 2 GHz carrier
};

enum class TrainingPreset { Paper, Desk };

struct ExperimentConfig {
    SystemConfig system;
    PilotPreset pilot_preset = PilotPreset::P84;
    std::vector<double> snr_grid_db = {0, 5, 10, 15, 20, 25, 30};
    TrainChannelSpec train_channel;
    TestChannelSpec test_channel;
    TrainingPreset preset = TrainingPreset::Desk;
    int train_subframes = 2000;
    int val_subframes = 400;
    int test_subframes_per_snr = 400;
    int epochs = 20;
    int batch_size = 20;
    double lr = 1e-3;
    int n_ici = 2;
    int num_sinusoids = 32;
    std::uint64_t seed = 1;

    static ExperimentConfig with_preset(TrainingPreset preset);

    // Loads JSON over preset defaults; unknown keys are rejected.
    static ExperimentConfig from_json_file(const std::string& path);
    std::string to_json() const;

    // FNV-1a of the canonical JSON dump, for report metadata.
    std::uint64_t config_hash() const;

    PilotPattern pilot_pattern() const;
    DelayProfile test_profile() const;
    void validate() const;
};

enum class DatasetSplit { Train, Val, Test };

std::string split_file_name(DatasetSplit split, double snr_db = 0.0);

// The channel drawn for one subframe of a split: train/val sample the tap
// count and Doppler per subframe, test always uses the evaluation channel.
struct ChannelDraw {
    DelayProfile profile;
    double doppler_hz = 0.0;
};

ChannelDraw subframe_channel_draw(const ExperimentConfig& cfg, DatasetSplit split, int index,
                                  double snr_db = 0.0);

// Draws the subframes of one split into an in-memory dataset. Train/val use
// the training channel model at its fixed SNR; test uses the evaluation
// channel model at the given SNR.
DatasetFile build_dataset(const ExperimentConfig& cfg, DatasetSplit split, double snr_db = 0.0);

// Writes train.icin / val.icin / test_snr<v>.icin files into out_dir.
// `split` may be "train", "val", "test", or "all".
void generate_dataset_files(const ExperimentConfig& cfg, const std::string& split,
                            const std::string& out_dir);

}  // namespace icilab::harness
