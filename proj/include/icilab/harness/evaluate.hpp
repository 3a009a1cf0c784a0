#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "icilab/estimators.hpp"
#include "icilab/harness/experiment.hpp"
#include "icilab/net/training.hpp"

namespace icilab::harness {

// A full-grid channel estimator under test: maps one received subframe to a
// K x T channel estimate.
using GridEstimator =
    std::function<ComplexGrid(const ComplexGrid& y, const PilotPattern& pattern, double noise_var)>;

struct NamedEstimator {
    std::string column;  // CSV column name
    GridEstimator fn;
};

struct EvalReport {
    std::vector<double> snr_db;                 // ascending
    std::vector<std::string> columns;
    std::vector<std::vector<double>> mse;       // [snr index][column index]
    std::string metadata_json;

    double value(double snr, const std::string& column) const;
};

// Mean per-entry squared estimation error over a stored dataset.
double dataset_mse(const DatasetFile& ds, const GridEstimator& est);

// Runs every estimator over the per-SNR datasets; rows come out sorted by SNR.
EvalReport evaluate_mse(const std::vector<NamedEstimator>& estimators,
                        const std::vector<std::pair<double, const DatasetFile*>>& test_sets,
                        const std::string& metadata_json);

// CSV with header "snr_db,<columns...>" and one row per SNR.
std::string report_to_csv(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

// --- estimator constructors ---

GridEstimator make_ls_interp_estimator();
GridEstimator make_lmmse_estimator(ChannelStats stats);
GridEstimator make_prednn_estimator(net::PreDnnConfig cfg, nn::ModelParams<float> params);
GridEstimator make_casresnet_estimator(net::CasResNetConfig cfg, nn::ModelParams<float> params);
GridEstimator make_icinet_estimator(net::PreDnnConfig pre_cfg, net::CasResNetConfig cas_cfg,
                                    nn::ModelParams<float> pre_params,
                                    nn::ModelParams<float> cas_params);

// --- refinement-width sweep ---

struct SweepRow {
    int n_ici = 0;
    double val_mse = 0.0;  // per-entry grid MSE on the validation set
};

struct SweepTable {
    std::vector<SweepRow> rows;
    double ls_val_mse = 0.0;  // stage-1 baseline on the same validation set
};

// Trains the subcarrier-wise net once per neighbor radius on identical data
// and seeds and reports the validation grid MSE of each.
SweepTable sweep_n_ici(const std::vector<int>& values, const net::TrainingSet& train,
                       const net::TrainingSet& val, const net::TrainConfig& base_cfg);

std::string sweep_to_csv(const SweepTable& table);

// --- complexity accounting ---

struct ComplexityRow {
    std::string name;
    std::int64_t macs = 0;
    std::int64_t params = 0;
};

// MAC/parameter counts of the image-refinement net alone and of the full
// two-stage network, for one K x T subframe (subcarrier-wise net applied at
// every grid position).
std::vector<ComplexityRow> complexity_table(const SystemConfig& system,
                                            const net::PreDnnConfig& pre_cfg,
                                            const net::CasResNetConfig& cas_cfg);

std::string complexity_to_text(const std::vector<ComplexityRow>& rows);
std::string complexity_to_csv(const std::vector<ComplexityRow>& rows);

}  // namespace icilab::harness
