#include "icilab/harness/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "icilab/parallel.hpp"
#include "icilab/rng.hpp"

namespace icilab::harness {

using nlohmann::json;

namespace {

constexpr std::uint64_t kStreamPilot = 0x7110;
constexpr std::uint64_t kStreamTrain = 0x51;
constexpr std::uint64_t kStreamVal = 0x52;
constexpr std::uint64_t kStreamTest = 0x53;

std::vector<std::complex<float>> to_f32(const ComplexGrid& g) {
    std::vector<std::complex<float>> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = std::complex<float>(static_cast<float>(g.data[i].real()),
                                   static_cast<float>(g.data[i].imag()));
    return v;
}

json preset_defaults(TrainingPreset preset) {
    json j;
    if (preset == TrainingPreset::Paper) {
        j["preset"] = "paper";
        j["train_subframes"] = 10000;
        j["val_subframes"] = 2000;
        j["test_subframes_per_snr"] = 2000;
        j["epochs"] = 100;
        j["batch_size"] = 200;
    } else {
        j["preset"] = "desk";
        j["train_subframes"] = 2000;
        j["val_subframes"] = 400;
        j["test_subframes_per_snr"] = 400;
        j["epochs"] = 20;
        j["batch_size"] = 20;
    }
    return j;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["system"] = {{"subcarriers", c.system.subcarriers},
                   {"symbols_per_subframe", c.system.symbols_per_subframe},
                   {"cp_len", c.system.cp_len},
                   {"subcarrier_spacing_hz", c.system.subcarrier_spacing_hz},
                   {"carrier_hz", c.system.carrier_hz}};
    j["pilot_preset"] = (c.pilot_preset == PilotPreset::P84) ? "P84" : "P48";
    j["snr_grid_db"] = c.snr_grid_db;
    j["train_channel"] = {{"taps_min", c.train_channel.taps_min},
                          {"taps_max", c.train_channel.taps_max},
                          {"doppler_min_hz", c.train_channel.doppler_min_hz},
                          {"doppler_max_hz", c.train_channel.doppler_max_hz},
                          {"snr_db", c.train_channel.snr_db}};
    j["test_channel"] = {{"doppler_hz", c.test_channel.doppler_hz}};
    j["preset"] = (c.preset == TrainingPreset::Paper) ? "paper" : "desk";
    j["train_subframes"] = c.train_subframes;
    j["val_subframes"] = c.val_subframes;
    j["test_subframes_per_snr"] = c.test_subframes_per_snr;
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["lr"] = c.lr;
    j["n_ici"] = c.n_ici;
    j["num_sinusoids"] = c.num_sinusoids;
    j["seed"] = c.seed;
    return j;
}

void apply_json(ExperimentConfig& c, const json& j) {
    static const char* known[] = {"system",        "pilot_preset",  "snr_grid_db",
                                  "train_channel", "test_channel",  "preset",
                                  "train_subframes", "val_subframes", "test_subframes_per_snr",
                                  "epochs",        "batch_size",    "lr",
                                  "n_ici",         "num_sinusoids", "seed"};
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    if (j.contains("system")) {
        const json& s = j["system"];
        c.system.subcarriers = s.value("subcarriers", c.system.subcarriers);
        c.system.symbols_per_subframe = s.value("symbols_per_subframe", c.system.symbols_per_subframe);
        c.system.cp_len = s.value("cp_len", c.system.cp_len);
        c.system.subcarrier_spacing_hz = s.value("subcarrier_spacing_hz", c.system.subcarrier_spacing_hz);
        c.system.carrier_hz = s.value("carrier_hz", c.system.carrier_hz);
    }
    if (j.contains("pilot_preset")) {
        const std::string p = j["pilot_preset"];
        if (p == "P84")
            c.pilot_preset = PilotPreset::P84;
        else if (p == "P48")
            c.pilot_preset = PilotPreset::P48;
        else
            throw std::invalid_argument("config: unknown pilot preset '" + p + "'");
    }
    if (j.contains("snr_grid_db")) c.snr_grid_db = j["snr_grid_db"].get<std::vector<double>>();
    if (j.contains("train_channel")) {
        const json& t = j["train_channel"];
        c.train_channel.taps_min = t.value("taps_min", c.train_channel.taps_min);
        c.train_channel.taps_max = t.value("taps_max", c.train_channel.taps_max);
        c.train_channel.doppler_min_hz = t.value("doppler_min_hz", c.train_channel.doppler_min_hz);
        c.train_channel.doppler_max_hz = t.value("doppler_max_hz", c.train_channel.doppler_max_hz);
        c.train_channel.snr_db = t.value("snr_db", c.train_channel.snr_db);
    }
    if (j.contains("test_channel"))
        c.test_channel.doppler_hz = j["test_channel"].value("doppler_hz", c.test_channel.doppler_hz);
    if (j.contains("train_subframes")) c.train_subframes = j["train_subframes"];
    if (j.contains("val_subframes")) c.val_subframes = j["val_subframes"];
    if (j.contains("test_subframes_per_snr")) c.test_subframes_per_snr = j["test_subframes_per_snr"];
    if (j.contains("epochs")) c.epochs = j["epochs"];
    if (j.contains("batch_size")) c.batch_size = j["batch_size"];
    if (j.contains("lr")) c.lr = j["lr"];
    if (j.contains("n_ici")) c.n_ici = j["n_ici"];
    if (j.contains("num_sinusoids")) c.num_sinusoids = j["num_sinusoids"];
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
}

}  // namespace

ExperimentConfig ExperimentConfig::with_preset(TrainingPreset preset) {
    ExperimentConfig c;
    c.preset = preset;
    json defaults = preset_defaults(preset);
    defaults.erase("preset");
    apply_json(c, defaults);
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j = json::parse(in);

    TrainingPreset preset = TrainingPreset::Desk;
    if (j.contains("preset")) {
        const std::string p = j["preset"];
        if (p == "paper")
            preset = TrainingPreset::Paper;
        else if (p == "desk")
            preset = TrainingPreset::Desk;
        else
            throw std::invalid_argument("config: unknown preset '" + p + "'");
    }
    ExperimentConfig c = with_preset(preset);
    j.erase("preset");
    apply_json(c, j);
    c.validate();
    return c;
}

std::string ExperimentConfig::to_json() const { return config_to_json(*this).dump(2); }

std::uint64_t ExperimentConfig::config_hash() const {
    const std::string s = config_to_json(*this).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

PilotPattern ExperimentConfig::pilot_pattern() const {
    return make_pilot_pattern(pilot_preset, system, derive_seed(seed, kStreamPilot));
}

DelayProfile ExperimentConfig::test_profile() const {
    return DelayProfile::eva(system.sample_rate_hz());
}

void ExperimentConfig::validate() const {
    system.validate();
    if (snr_grid_db.empty()) throw std::invalid_argument("config: empty SNR grid");
    if (train_subframes <= 0 || val_subframes <= 0 || test_subframes_per_snr <= 0)
        throw std::invalid_argument("config: non-positive dataset size");
    if (train_channel.taps_min < 1 || train_channel.taps_max < train_channel.taps_min)
        throw std::invalid_argument("config: bad tap range");
    if (epochs <= 0 || batch_size <= 0 || lr <= 0.0)
        throw std::invalid_argument("config: bad training parameters");
    if (n_ici < 0) throw std::invalid_argument("config: negative n_ici");
}

std::string split_file_name(DatasetSplit split, double snr_db) {
    switch (split) {
        case DatasetSplit::Train: return "train.icin";
        case DatasetSplit::Val: return "val.icin";
        case DatasetSplit::Test: {
            char buf[48];
            std::snprintf(buf, sizeof(buf), "test_snr%g.icin", snr_db);
            return buf;
        }
    }
    throw std::logic_error("split_file_name: bad split");
}

namespace {

std::uint64_t split_stream(DatasetSplit split, double snr_db) {
    switch (split) {
        case DatasetSplit::Train: return kStreamTrain;
        case DatasetSplit::Val: return kStreamVal;
        case DatasetSplit::Test:
            // separate stream per SNR point so test sets are independent
            return derive_seed(kStreamTest,
                               static_cast<std::uint64_t>(std::llround(snr_db * 100.0 + 1e6)));
    }
    throw std::logic_error("split_stream: bad split");
}

}  // namespace

ChannelDraw subframe_channel_draw(const ExperimentConfig& cfg, DatasetSplit split, int index,
                                  double snr_db) {
    ChannelDraw out;
    if (split == DatasetSplit::Test) {
        out.profile = cfg.test_profile();
        out.doppler_hz = cfg.test_channel.doppler_hz;
        return out;
    }
    const std::uint64_t sf_seed =
        derive_seed(cfg.seed, split_stream(split, snr_db), static_cast<std::uint64_t>(index));
    Rng draw = Rng::from_stream(sf_seed, 0xD0);
    out.profile = DelayProfile::linear_attenuation(
        draw.uniform_int(cfg.train_channel.taps_min, cfg.train_channel.taps_max));
    out.doppler_hz = draw.uniform(cfg.train_channel.doppler_min_hz, cfg.train_channel.doppler_max_hz);
    return out;
}

DatasetFile build_dataset(const ExperimentConfig& cfg, DatasetSplit split, double snr_db) {
    cfg.validate();
    const PilotPattern pattern = cfg.pilot_pattern();

    int count = 0;
    switch (split) {
        case DatasetSplit::Train: count = cfg.train_subframes; break;
        case DatasetSplit::Val: count = cfg.val_subframes; break;
        case DatasetSplit::Test: count = cfg.test_subframes_per_snr; break;
    }
    const double snr = (split == DatasetSplit::Test) ? snr_db : cfg.train_channel.snr_db;
    const std::uint64_t stream = split_stream(split, snr_db);

    DatasetFile ds;
    ds.grid_k = cfg.system.subcarriers;
    ds.grid_t = cfg.system.symbols_per_subframe;
    ds.pattern = pattern;
    ds.noise_var = static_cast<float>(std::pow(10.0, -snr / 10.0));
    ds.items.resize(count);

    parallel_for(count, [&](int i, int) {
        const std::uint64_t sf_seed = derive_seed(cfg.seed, stream, static_cast<std::uint64_t>(i));
        const ChannelDraw draw = subframe_channel_draw(cfg, split, i, snr_db);
        const Subframe sf = generate_subframe(cfg.system, draw.profile, draw.doppler_hz,
                                              cfg.num_sinusoids, pattern, snr, sf_seed);
        ds.items[i].x = to_f32(sf.tx);
        ds.items[i].y = to_f32(sf.rx);
        ds.items[i].h_bar = to_f32(sf.channel.true_cfr);
    });
    return ds;
}

void generate_dataset_files(const ExperimentConfig& cfg, const std::string& split,
                            const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto path = [&](const std::string& name) {
        return (std::filesystem::path(out_dir) / name).string();
    };
    if (split == "train" || split == "all")
        write_dataset(path(split_file_name(DatasetSplit::Train)),
                      build_dataset(cfg, DatasetSplit::Train));
    if (split == "val" || split == "all")
        write_dataset(path(split_file_name(DatasetSplit::Val)), build_dataset(cfg, DatasetSplit::Val));
    if (split == "test" || split == "all")
        for (double snr : cfg.snr_grid_db)
            write_dataset(path(split_file_name(DatasetSplit::Test, snr)),
                          build_dataset(cfg, DatasetSplit::Test, snr));
    if (split != "train" && split != "val" && split != "test" && split != "all")
        throw std::invalid_argument("generate_dataset_files: unknown split '" + split + "'");
}

}  // namespace icilab::harness
