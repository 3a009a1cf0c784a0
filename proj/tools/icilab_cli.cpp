// Command-line driver: dataset generation, training, evaluation, the
// neighbor-radius sweep, complexity table, and CFR dumps.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "icilab/harness/evaluate.hpp"
#include "icilab/harness/experiment.hpp"
#include "icilab/harness/weights_io.hpp"
#include "icilab/net/training.hpp"
#include "icilab/nn/init.hpp"

namespace fs = std::filesystem;
using namespace icilab;
using namespace icilab::harness;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string preset = "desk";
};

ExperimentConfig load_config(const CommonOpts& opts) {
    ExperimentConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = ExperimentConfig::from_json_file(opts.config_path);
    } else {
        cfg = ExperimentConfig::with_preset(opts.preset == "paper" ? TrainingPreset::Paper
                                                                   : TrainingPreset::Desk);
    }
    if (opts.seed) cfg.seed = *opts.seed;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON experiment config")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", opts.seed, "override the config seed");
    cmd->add_option("--preset", opts.preset, "training preset when no config is given")
        ->check(CLI::IsMember({"paper", "desk"}));
}

void write_text(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp);
        out << text;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    fs::rename(tmp, path);
}

net::TrainConfig train_config_of(const ExperimentConfig& cfg) {
    net::TrainConfig tc;
    tc.epochs = cfg.epochs;
    tc.batch_size = cfg.batch_size;
    tc.lr = cfg.lr;
    tc.seed = cfg.seed;
    tc.pre_cfg.n_ici = cfg.n_ici;
    return tc;
}

nlohmann::json trace_json(const net::LossTrace& t) {
    return {{"train_loss", t.train_loss},
            {"val_loss", t.val_loss},
            {"updates_per_epoch", t.updates_per_epoch}};
}

int cmd_generate_dataset(const ExperimentConfig& cfg, const std::string& split,
                         const std::string& out_dir) {
    generate_dataset_files(cfg, split, out_dir);
    std::cout << "wrote " << split << " split(s) to " << out_dir << "\n";
    return 0;
}

int cmd_train(const ExperimentConfig& cfg, const std::string& mode, const std::string& data_dir,
              const std::string& out_dir) {
    fs::create_directories(out_dir);
    const auto data = [&](DatasetSplit s) {
        return read_dataset((fs::path(data_dir) / split_file_name(s)).string());
    };
    const net::TrainingSet train = net::prepare_training_set(data(DatasetSplit::Train));
    const net::TrainingSet val = net::prepare_training_set(data(DatasetSplit::Val));
    const net::TrainConfig tc = train_config_of(cfg);

    nlohmann::json traces;
    const auto save = [&](const std::string& name, const nn::ModelParams<float>* pre,
                          const nn::ModelParams<float>* cas) {
        WeightsFile wf;
        wf.n_ici = static_cast<std::uint32_t>(tc.pre_cfg.n_ici);
        wf.hidden_units = static_cast<std::uint32_t>(tc.pre_cfg.hidden_units);
        if (pre) pack_params(wf, "prednn", *pre);
        if (cas) pack_params(wf, "casresnet", *cas);
        write_weights((fs::path(out_dir) / name).string(), wf);
    };

    if (mode == "sequential" || mode == "all") {
        const net::SequentialResult res = net::train_sequential(train, val, tc);
        save("icinet_seq.iciw", &res.pre_params, &res.cas_params);
        save("prednn.iciw", &res.pre_params, nullptr);
        traces["sequential_phase1"] = trace_json(res.phase1);
        traces["sequential_phase2"] = trace_json(res.phase2);
        std::cout << "sequential: phase-1 val " << res.phase1.val_loss.back() << ", phase-2 val "
                  << res.phase2.val_loss.back() << "\n";
    }
    if (mode == "e2e" || mode == "all") {
        const net::EndToEndResult res = net::train_end_to_end(train, val, tc);
        save("icinet_e2e.iciw", &res.pre_params, &res.cas_params);
        traces["e2e"] = trace_json(res.trace);
        std::cout << "e2e: final val " << res.trace.val_loss.back() << "\n";
    }
    if (mode == "casonly" || mode == "all") {
        const net::CasOnlyResult res = net::train_casresnet_only(train, val, tc);
        save("casresnet_only.iciw", nullptr, &res.cas_params);
        traces["casonly"] = trace_json(res.trace);
        std::cout << "casonly: final val " << res.trace.val_loss.back() << "\n";
    }

    // merge with traces from earlier runs against the same directory
    const std::string trace_path = (fs::path(out_dir) / "train_traces.json").string();
    if (fs::exists(trace_path)) {
        std::ifstream in(trace_path);
        nlohmann::json old = nlohmann::json::parse(in);
        for (auto& [k, v] : traces.items()) old[k] = v;
        traces = old;
    }
    write_text(trace_path, traces.dump(2));
    return 0;
}

int cmd_evaluate(const ExperimentConfig& cfg, const std::string& data_dir,
                 const std::string& ckpt_dir, const std::string& out_path,
                 const std::string& format) {
    net::PreDnnConfig pre_cfg;
    pre_cfg.n_ici = cfg.n_ici;
    const net::CasResNetConfig cas_cfg;
    const nn::Model pre = net::build_prednn_model(pre_cfg);
    const nn::Model cas = net::build_casresnet_model(cas_cfg);

    const auto ckpt = [&](const std::string& name) {
        return read_weights((fs::path(ckpt_dir) / name).string());
    };
    const WeightsFile seq = ckpt("icinet_seq.iciw");
    const WeightsFile e2e = ckpt("icinet_e2e.iciw");
    const WeightsFile casonly = ckpt("casresnet_only.iciw");
    if (seq.n_ici != static_cast<std::uint32_t>(cfg.n_ici))
        throw std::runtime_error("checkpoint n_ici does not match the config");

    // channel statistics for the linear comparator come from the evaluation
    // channel model itself
    const ChannelStats stats = estimate_channel_stats(
        cfg.system, cfg.test_profile(), cfg.test_channel.doppler_hz, cfg.num_sinusoids,
        cfg.pilot_pattern(), 1000, derive_seed(cfg.seed, 0x57A7));

    std::vector<NamedEstimator> ests;
    ests.push_back({"mse_ls", make_ls_interp_estimator()});
    ests.push_back({"mse_predn", make_prednn_estimator(pre_cfg, unpack_params(seq, "prednn", pre))});
    ests.push_back(
        {"mse_casres", make_casresnet_estimator(cas_cfg, unpack_params(casonly, "casresnet", cas))});
    ests.push_back({"mse_icinet_seq",
                    make_icinet_estimator(pre_cfg, cas_cfg, unpack_params(seq, "prednn", pre),
                                          unpack_params(seq, "casresnet", cas))});
    ests.push_back({"mse_icinet_e2e",
                    make_icinet_estimator(pre_cfg, cas_cfg, unpack_params(e2e, "prednn", pre),
                                          unpack_params(e2e, "casresnet", cas))});
    ests.push_back({"mse_lmmse", make_lmmse_estimator(stats)});

    std::vector<DatasetFile> files;
    files.reserve(cfg.snr_grid_db.size());
    std::string dataset_ids;
    for (double snr : cfg.snr_grid_db) {
        const std::string name = split_file_name(DatasetSplit::Test, snr);
        files.push_back(read_dataset((fs::path(data_dir) / name).string()));
        dataset_ids += (dataset_ids.empty() ? "" : ",") + name;
    }
    std::vector<std::pair<double, const DatasetFile*>> sets;
    for (std::size_t i = 0; i < files.size(); ++i) sets.emplace_back(cfg.snr_grid_db[i], &files[i]);

    nlohmann::json meta;
    meta["config_hash"] = cfg.config_hash();
    meta["seed"] = cfg.seed;
    meta["datasets"] = dataset_ids;
    meta["test_subframes_per_snr"] = cfg.test_subframes_per_snr;
    meta["test_doppler_hz"] = cfg.test_channel.doppler_hz;
    // f_D = v f_c / c: at the 2 GHz default carrier, 926 Hz is 500 km/h
    meta["vehicle_speed_kmh"] =
        cfg.test_channel.doppler_hz * 299792458.0 / cfg.system.carrier_hz * 3.6;
    const EvalReport report = evaluate_mse(ests, sets, meta.dump());

    const std::string text = (format == "json") ? report_to_json(report) : report_to_csv(report);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        write_text(out_path, text);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::vector<int>& values,
              const std::string& data_dir, const std::string& out_path) {
    const auto data = [&](DatasetSplit s) {
        return read_dataset((fs::path(data_dir) / split_file_name(s)).string());
    };
    const net::TrainingSet train = net::prepare_training_set(data(DatasetSplit::Train));
    const net::TrainingSet val = net::prepare_training_set(data(DatasetSplit::Val));
    const SweepTable table = sweep_n_ici(values, train, val, train_config_of(cfg));
    const std::string csv = sweep_to_csv(table);
    if (out_path.empty() || out_path == "-") {
        std::cout << csv;
    } else {
        write_text(out_path, csv);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_count_complexity(const ExperimentConfig& cfg, const std::string& out_path) {
    net::PreDnnConfig pre_cfg;
    pre_cfg.n_ici = cfg.n_ici;
    const auto rows = complexity_table(cfg.system, pre_cfg, {});
    std::cout << complexity_to_text(rows);
    if (!out_path.empty()) {
        write_text(out_path, complexity_to_csv(rows));
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_dump_cfr(const ExperimentConfig& cfg, int symbol, double doppler_hz,
                 const std::string& out_path) {
    FadingSpec fading;
    fading.doppler_max_hz = doppler_hz >= 0.0 ? doppler_hz : cfg.test_channel.doppler_hz;
    fading.num_sinusoids = cfg.num_sinusoids;
    fading.seed = derive_seed(cfg.seed, 0xCF);
    const ChannelRealization ch = realize_channel(cfg.system, cfg.test_profile(), fading);
    const std::vector<double> mag = dump_cfr_magnitude(ch, symbol, cfg.system);
    write_cfr_magnitude_csv(out_path, mag, cfg.system.subcarriers);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"channel-estimation laboratory for rapidly time-varying OFDM"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* gen = app.add_subcommand("generate-dataset", "draw and store subframe datasets");
    add_common(gen, opts);
    std::string gen_split = "all";
    std::string gen_out = "data";
    gen->add_option("--split", gen_split, "train|val|test|all")
        ->check(CLI::IsMember({"train", "val", "test", "all"}));
    gen->add_option("--out", gen_out, "output directory");

    auto* train = app.add_subcommand("train", "train the refinement networks");
    add_common(train, opts);
    std::string train_mode = "all";
    std::string train_data = "data";
    std::string train_out = "ckpt";
    train->add_option("--mode", train_mode, "sequential|e2e|casonly|all")
        ->check(CLI::IsMember({"sequential", "e2e", "casonly", "all"}));
    train->add_option("--data", train_data, "dataset directory");
    train->add_option("--out", train_out, "checkpoint output directory");

    auto* eval = app.add_subcommand("evaluate", "per-SNR MSE of every estimator");
    add_common(eval, opts);
    std::string eval_data = "data";
    std::string eval_ckpt = "ckpt";
    std::string eval_out;
    std::string eval_fmt = "csv";
    eval->add_option("--data", eval_data, "dataset directory");
    eval->add_option("--ckpt", eval_ckpt, "checkpoint directory");
    eval->add_option("--out", eval_out, "output file ('-' for stdout)");
    eval->add_option("--format", eval_fmt, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    auto* sweep = app.add_subcommand("sweep-nici", "validation MSE per neighbor radius");
    add_common(sweep, opts);
    std::vector<int> sweep_values = {0, 1, 2, 3};
    std::string sweep_data = "data";
    std::string sweep_out;
    sweep->add_option("--values", sweep_values, "radii to train");
    sweep->add_option("--data", sweep_data, "dataset directory");
    sweep->add_option("--out", sweep_out, "output CSV ('-' for stdout)");

    auto* count = app.add_subcommand("count-complexity", "MAC and parameter counts");
    add_common(count, opts);
    std::string count_out;
    count->add_option("--out", count_out, "also write CSV here");

    auto* dump = app.add_subcommand("dump-cfr", "normalized CFR magnitude as CSV");
    add_common(dump, opts);
    int dump_symbol = 0;
    double dump_doppler = -1.0;
    std::string dump_out = "cfr.csv";
    dump->add_option("--symbol", dump_symbol, "OFDM symbol index");
    dump->add_option("--doppler", dump_doppler, "max Doppler in Hz (default: test channel)");
    dump->add_option("--out", dump_out, "output CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const ExperimentConfig cfg = load_config(opts);
        if (gen->parsed()) return cmd_generate_dataset(cfg, gen_split, gen_out);
        if (train->parsed()) return cmd_train(cfg, train_mode, train_data, train_out);
        if (eval->parsed()) return cmd_evaluate(cfg, eval_data, eval_ckpt, eval_out, eval_fmt);
        if (sweep->parsed()) return cmd_sweep(cfg, sweep_values, sweep_data, sweep_out);
        if (count->parsed()) return cmd_count_complexity(cfg, count_out);
        if (dump->parsed()) return cmd_dump_cfr(cfg, dump_symbol, dump_doppler, dump_out);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
