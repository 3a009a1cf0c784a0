#include "icilab/harness/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "icilab/nn/counting.hpp"
#include "icilab/parallel.hpp"

namespace icilab::harness {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

double EvalReport::value(double snr, const std::string& column) const {
    for (std::size_t i = 0; i < snr_db.size(); ++i) {
        if (snr_db[i] != snr) continue;
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == column) return mse[i][c];
    }
    throw std::invalid_argument("EvalReport: no entry for (" + fmt_double(snr) + ", " + column + ")");
}

double dataset_mse(const DatasetFile& ds, const GridEstimator& est) {
    if (ds.items.empty()) throw std::invalid_argument("dataset_mse: empty dataset");
    std::vector<double> per_subframe(ds.items.size(), 0.0);
    parallel_for(static_cast<int>(ds.items.size()), [&](int i, int) {
        const ComplexGrid y = item_grid(ds.items[i].y, ds.grid_k, ds.grid_t);
        const ComplexGrid truth = item_grid(ds.items[i].h_bar, ds.grid_k, ds.grid_t);
        const ComplexGrid est_grid = est(y, ds.pattern, ds.noise_var);
        per_subframe[i] = grid_mse(est_grid, truth);
    });
    return std::accumulate(per_subframe.begin(), per_subframe.end(), 0.0) /
           static_cast<double>(per_subframe.size());
}

EvalReport evaluate_mse(const std::vector<NamedEstimator>& estimators,
                        const std::vector<std::pair<double, const DatasetFile*>>& test_sets,
                        const std::string& metadata_json) {
    if (estimators.empty()) throw std::invalid_argument("evaluate_mse: no estimators");
    EvalReport report;
    report.metadata_json = metadata_json;
    for (const auto& e : estimators) report.columns.push_back(e.column);

    std::vector<std::pair<double, const DatasetFile*>> sorted = test_sets;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    for (const auto& [snr, ds] : sorted) {
        report.snr_db.push_back(snr);
        std::vector<double> row;
        for (const auto& e : estimators) row.push_back(dataset_mse(*ds, e.fn));
        report.mse.push_back(std::move(row));
    }
    return report;
}

std::string report_to_csv(const EvalReport& report) {
    std::string out = "snr_db";
    for (const auto& c : report.columns) out += "," + c;
    out += "\n";
    for (std::size_t i = 0; i < report.snr_db.size(); ++i) {
        out += fmt_double(report.snr_db[i]);
        for (double v : report.mse[i]) out += "," + fmt_double(v);
        out += "\n";
    }
    return out;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["snr_db"] = report.snr_db;
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        std::vector<double> col;
        for (const auto& row : report.mse) col.push_back(row[c]);
        j["mse"][report.columns[c]] = col;
    }
    if (!report.metadata_json.empty()) j["metadata"] = nlohmann::json::parse(report.metadata_json);
    return j.dump(2);
}

GridEstimator make_ls_interp_estimator() {
    return [](const ComplexGrid& y, const PilotPattern& pattern, double) {
        return interpolate_grid(ls_at_pilots(y, pattern), pattern, y.K, y.T);
    };
}

GridEstimator make_lmmse_estimator(ChannelStats stats) {
    return [stats = std::move(stats)](const ComplexGrid& y, const PilotPattern& pattern,
                                      double noise_var) {
        return lmmse_estimate(ls_at_pilots(y, pattern), stats, noise_var);
    };
}

namespace {

struct Stage1 {
    ComplexGrid h_hat;
    ComplexGrid x_hat;
};

Stage1 run_stage1(const ComplexGrid& y, const PilotPattern& pattern) {
    Stage1 s;
    s.h_hat = interpolate_grid(ls_at_pilots(y, pattern), pattern, y.K, y.T);
    s.x_hat = equalize_hard(y, s.h_hat, pattern).symbols;
    return s;
}

}  // namespace

GridEstimator make_prednn_estimator(net::PreDnnConfig cfg, nn::ModelParams<float> params) {
    auto model = std::make_shared<nn::Model>(net::build_prednn_model(cfg));
    auto p = std::make_shared<nn::ModelParams<float>>(std::move(params));
    return [cfg, model, p](const ComplexGrid& y, const PilotPattern& pattern, double) {
        const Stage1 s = run_stage1(y, pattern);
        return net::prednn_refine(y, s.x_hat, s.h_hat, *model, *p, cfg);
    };
}

GridEstimator make_casresnet_estimator(net::CasResNetConfig cfg, nn::ModelParams<float> params) {
    auto model = std::make_shared<nn::Model>(net::build_casresnet_model(cfg));
    auto p = std::make_shared<nn::ModelParams<float>>(std::move(params));
    return [model, p](const ComplexGrid& y, const PilotPattern& pattern, double) {
        const Stage1 s = run_stage1(y, pattern);
        return net::casresnet_refine(s.h_hat, *model, *p);
    };
}

GridEstimator make_icinet_estimator(net::PreDnnConfig pre_cfg, net::CasResNetConfig cas_cfg,
                                    nn::ModelParams<float> pre_params,
                                    nn::ModelParams<float> cas_params) {
    auto ici = std::make_shared<net::IciNet>(pre_cfg, cas_cfg);
    auto params = std::make_shared<net::IciNetParams<float>>();
    params->pre = std::move(pre_params);
    params->cas = std::move(cas_params);
    return [ici, params](const ComplexGrid& y, const PilotPattern& pattern, double) {
        const Stage1 s = run_stage1(y, pattern);
        return net::icinet_forward(y, s.x_hat, s.h_hat, *ici, *params);
    };
}

SweepTable sweep_n_ici(const std::vector<int>& values, const net::TrainingSet& train,
                       const net::TrainingSet& val, const net::TrainConfig& base_cfg) {
    if (values.empty()) throw std::invalid_argument("sweep_n_ici: no values");

    SweepTable table;
    std::vector<double> ls(val.size(), 0.0);
    parallel_for(val.size(), [&](int i, int) {
        ls[i] = grid_mse(val.items[i].h_hat, val.items[i].h_bar);
    });
    table.ls_val_mse = std::accumulate(ls.begin(), ls.end(), 0.0) / val.size();

    for (int n : values) {
        net::TrainConfig cfg = base_cfg;
        cfg.pre_cfg.n_ici = n;
        SweepRow row;
        row.n_ici = n;
        row.val_mse = net::train_prednn_phase1(train, val, cfg).val_grid_mse;
        table.rows.push_back(row);
    }
    return table;
}

std::string sweep_to_csv(const SweepTable& table) {
    std::string out = "n_ici,val_mse\n";
    for (const auto& r : table.rows)
        out += std::to_string(r.n_ici) + "," + fmt_double(r.val_mse) + "\n";
    out += "ls_baseline," + fmt_double(table.ls_val_mse) + "\n";
    return out;
}

std::vector<ComplexityRow> complexity_table(const SystemConfig& system,
                                            const net::PreDnnConfig& pre_cfg,
                                            const net::CasResNetConfig& cas_cfg) {
    const nn::Model pre = net::build_prednn_model(pre_cfg);
    const nn::Model cas = net::build_casresnet_model(cas_cfg);
    const int positions = system.subcarriers * system.symbols_per_subframe;

    const std::int64_t cas_macs =
        nn::count_macs(cas, {system.subcarriers, system.symbols_per_subframe, cas_cfg.channels});
    const std::int64_t cas_params = nn::count_params(cas);
    const std::int64_t pre_macs = nn::count_macs(pre, {positions, pre_cfg.input_width()});
    const std::int64_t pre_params = nn::count_params(pre);

    return {{"CasResNet", cas_macs, cas_params},
            {"ICINet", pre_macs + cas_macs, pre_params + cas_params}};
}

std::string complexity_to_text(const std::vector<ComplexityRow>& rows) {
    char buf[96];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%-12s %14s %12s\n", "Network", "MACs", "Params");
    out += buf;
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-12s %14lld %12lld\n", r.name.c_str(),
                      static_cast<long long>(r.macs), static_cast<long long>(r.params));
        out += buf;
    }
    return out;
}

std::string complexity_to_csv(const std::vector<ComplexityRow>& rows) {
    std::string out = "network,macs,params\n";
    for (const auto& r : rows)
        out += r.name + "," + std::to_string(r.macs) + "," + std::to_string(r.params) + "\n";
    return out;
}

}  // namespace icilab::harness
