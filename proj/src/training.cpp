#include "icilab/net/training.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "icilab/estimators.hpp"
#include "icilab/nn/init.hpp"
#include "icilab/nn/loss.hpp"
#include "icilab/parallel.hpp"
#include "icilab/rng.hpp"

namespace icilab::net {

namespace {

using nn::ModelParams;
using nn::Tensor;

constexpr std::uint64_t kStreamInitPre = 0x9E1;
constexpr std::uint64_t kStreamInitCas = 0x9E2;
constexpr std::uint64_t kStreamShuffle = 0x5AFF;

// target [K*T, 2] in the k-major row order used by the assembled inputs
Tensor<float> grid_target_rows(const ComplexGrid& g) {
    Tensor<float> t({g.K * g.T, 2});
    for (int k = 0; k < g.K; ++k)
        for (int tt = 0; tt < g.T; ++tt) {
            float* p = &t.data[(static_cast<std::size_t>(k) * g.T + tt) * 2];
            const cd v = g.at(k, tt);
            p[0] = static_cast<float>(v.real());
            p[1] = static_cast<float>(v.imag());
        }
    return t;
}

double squared_error(const Tensor<float>& a, const Tensor<float>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
        acc += d * d;
    }
    return acc;
}

// upstream gradient scale * 2 * (pred - target)
Tensor<float> loss_upstream(const Tensor<float>& pred, const Tensor<float>& target, double scale) {
    Tensor<float> g(pred.shape);
    for (std::size_t i = 0; i < pred.data.size(); ++i)
        g.data[i] = static_cast<float>(2.0 * scale *
                                       (static_cast<double>(pred.data[i]) - target.data[i]));
    return g;
}

void shuffle_indices(std::vector<int>& idx, Rng& rng) {
    for (int i = static_cast<int>(idx.size()) - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(idx[i], idx[j]);
    }
}

// Minibatch loop shared by every training mode. sample_bwd runs
// forward+backward for one sample, scaling the upstream loss gradient by
// `scale` and accumulating into the given (zeroed) gradient buffer; it
// returns the sample's raw squared error. Per-sample gradients are reduced
// in sample order, so results do not depend on the worker count.
LossTrace run_minibatch_training(
    int num_train, int num_val, const TrainConfig& cfg, std::uint64_t shuffle_stream,
    ModelParams<float>& params, const nn::Model& grads_like,
    const std::function<double(int sample, double scale, ModelParams<float>& grads)>& sample_bwd,
    const std::function<double(int sample)>& val_sample_loss,
    const std::function<void()>& after_update = {}) {
    if (num_train <= 0) throw std::invalid_argument("training: empty training set");
    if (cfg.batch_size <= 0 || cfg.epochs <= 0)
        throw std::invalid_argument("training: non-positive batch size or epoch count");

    nn::AdamState<float> adam;
    adam.lr = cfg.lr;
    adam.init(params);

    std::vector<int> order(num_train);
    std::iota(order.begin(), order.end(), 0);

    std::vector<ModelParams<float>> sample_grads(
        std::min(cfg.batch_size, num_train), ModelParams<float>::zeros_like(grads_like));
    std::vector<double> sample_losses(sample_grads.size(), 0.0);
    ModelParams<float> batch_grads = ModelParams<float>::zeros_like(grads_like);

    LossTrace trace;
    trace.updates_per_epoch = (num_train + cfg.batch_size - 1) / cfg.batch_size;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(derive_seed(cfg.seed, kStreamShuffle + shuffle_stream,
                                    static_cast<std::uint64_t>(epoch)));
        shuffle_indices(order, shuffle_rng);

        double epoch_sq = 0.0;
        for (int start = 0; start < num_train; start += cfg.batch_size) {
            const int bsz = std::min(cfg.batch_size, num_train - start);
            const double scale = 1.0 / bsz;
            parallel_for(bsz, [&](int bi, int) {
                sample_grads[bi].zero_data();
                sample_losses[bi] = sample_bwd(order[start + bi], scale, sample_grads[bi]);
            });

            batch_grads.zero_data();
            for (int bi = 0; bi < bsz; ++bi) {
                epoch_sq += sample_losses[bi];
                for (std::size_t ti = 0; ti < batch_grads.tensors.size(); ++ti) {
                    auto& acc = batch_grads.tensors[ti].data;
                    const auto& g = sample_grads[bi].tensors[ti].data;
                    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += g[j];
                }
            }
            if (!std::isfinite(epoch_sq))
                throw std::runtime_error("training: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch offset " +
                                         std::to_string(start));
            adam.step(params, batch_grads);
            if (after_update) after_update();
        }
        trace.train_loss.push_back(epoch_sq / num_train);

        if (num_val > 0) {
            std::vector<double> vloss(num_val, 0.0);
            parallel_for(num_val, [&](int i, int) { vloss[i] = val_sample_loss(i); });
            trace.val_loss.push_back(std::accumulate(vloss.begin(), vloss.end(), 0.0) / num_val);
        }
    }
    return trace;
}

Tensor<float> prednn_rows_forward(const TrainSample& s, const nn::Model& pre,
                                  const ModelParams<float>& pre_params, int n_ici,
                                  nn::ForwardCache<float>* cache = nullptr) {
    const Tensor<float> rows = assemble_prednn_inputs<float>(s.y, s.x_hat, s.h_hat, n_ici);
    return nn::forward(pre, pre_params, rows, cache);
}

}  // namespace

TrainingSet prepare_training_set(const harness::DatasetFile& ds) {
    TrainingSet set;
    set.grid_k = ds.grid_k;
    set.grid_t = ds.grid_t;
    set.items.resize(ds.items.size());
    parallel_for(static_cast<int>(ds.items.size()), [&](int i, int) {
        const harness::DatasetItem& it = ds.items[i];
        TrainSample& s = set.items[i];
        s.y = harness::item_grid(it.y, ds.grid_k, ds.grid_t);
        s.h_bar = harness::item_grid(it.h_bar, ds.grid_k, ds.grid_t);
        const PilotEstimates ls = ls_at_pilots(s.y, ds.pattern);
        s.h_hat = interpolate_grid(ls, ds.pattern, ds.grid_k, ds.grid_t);
        s.x_hat = equalize_hard(s.y, s.h_hat, ds.pattern).symbols;
    });
    return set;
}

Phase1Result train_prednn_phase1(const TrainingSet& train, const TrainingSet& val,
                                 const TrainConfig& cfg) {
    Phase1Result res;
    const nn::Model pre = build_prednn_model(cfg.pre_cfg);
    res.pre_params = nn::init_params<float>(pre, derive_seed(cfg.seed, kStreamInitPre));
    res.trace = run_minibatch_training(
        train.size(), val.size(), cfg, /*shuffle_stream=*/1, res.pre_params, pre,
        [&](int i, double scale, ModelParams<float>& grads) {
            const TrainSample& s = train.items[i];
            nn::ForwardCache<float> cache;
            const Tensor<float> out =
                prednn_rows_forward(s, pre, res.pre_params, cfg.pre_cfg.n_ici, &cache);
            const Tensor<float> target = grid_target_rows(s.h_bar);
            nn::backward(pre, res.pre_params, cache, loss_upstream(out, target, scale), grads);
            return squared_error(out, target);
        },
        [&](int i) {
            const TrainSample& s = val.items[i];
            const Tensor<float> out = prednn_rows_forward(s, pre, res.pre_params, cfg.pre_cfg.n_ici);
            return squared_error(out, grid_target_rows(s.h_bar));
        });
    if (val.size() > 0) res.val_grid_mse = prednn_grid_mse(val, pre, res.pre_params, cfg.pre_cfg);
    return res;
}

SequentialResult train_sequential(const TrainingSet& train, const TrainingSet& val,
                                  const TrainConfig& cfg) {
    SequentialResult res;
    const nn::Model pre = build_prednn_model(cfg.pre_cfg);
    const nn::Model cas = build_casresnet_model(cfg.cas_cfg);

    // phase 1: subcarrier-wise refinement against the true channel
    Phase1Result phase1 = train_prednn_phase1(train, val, cfg);
    res.pre_params = std::move(phase1.pre_params);
    res.phase1 = std::move(phase1.trace);

    // refined estimates are fixed once phase 1 ends; precompute them
    auto refine_all = [&](const TrainingSet& set) {
        std::vector<Tensor<float>> imgs(set.size());
        parallel_for(set.size(), [&](int i, int) {
            Tensor<float> out =
                prednn_rows_forward(set.items[i], pre, res.pre_params, cfg.pre_cfg.n_ici);
            out.shape = {set.grid_k, set.grid_t, 2};  // k-major rows: pure reshape
            imgs[i] = std::move(out);
        });
        return imgs;
    };
    const std::vector<Tensor<float>> train_tilde = refine_all(train);
    const std::vector<Tensor<float>> val_tilde = refine_all(val);

    // phase 2: image refinement on the frozen outputs
    res.cas_params = nn::init_params<float>(cas, derive_seed(cfg.seed, kStreamInitCas));
    res.phase2 = run_minibatch_training(
        train.size(), val.size(), cfg, /*shuffle_stream=*/2, res.cas_params, cas,
        [&](int i, double scale, ModelParams<float>& grads) {
            nn::ForwardCache<float> cache;
            const Tensor<float> out = nn::forward(cas, res.cas_params, train_tilde[i], &cache);
            const Tensor<float> target = grid_target_rows(train.items[i].h_bar);
            nn::backward(cas, res.cas_params, cache, loss_upstream(out, target, scale), grads);
            return squared_error(out, target);
        },
        [&](int i) {
            const Tensor<float> out = nn::forward(cas, res.cas_params, val_tilde[i]);
            return squared_error(out, grid_target_rows(val.items[i].h_bar));
        });
    return res;
}

EndToEndResult train_end_to_end(const TrainingSet& train, const TrainingSet& val,
                                const TrainConfig& cfg) {
    EndToEndResult res;
    const nn::Model pre = build_prednn_model(cfg.pre_cfg);
    const nn::Model cas = build_casresnet_model(cfg.cas_cfg);

    // same initial values as the sequential strategy
    res.pre_params = nn::init_params<float>(pre, derive_seed(cfg.seed, kStreamInitPre));
    res.cas_params = nn::init_params<float>(cas, derive_seed(cfg.seed, kStreamInitCas));

    // joint parameter vector so one optimizer drives both subnetworks
    nn::Model joint;  // layer list only used for gradient-buffer shapes
    joint.layers.insert(joint.layers.end(), pre.layers.begin(), pre.layers.end());
    joint.layers.insert(joint.layers.end(), cas.layers.begin(), cas.layers.end());
    ModelParams<float> joint_params;
    joint_params.names = res.pre_params.names;
    joint_params.tensors = res.pre_params.tensors;
    joint_params.names.insert(joint_params.names.end(), res.cas_params.names.begin(),
                              res.cas_params.names.end());
    joint_params.tensors.insert(joint_params.tensors.end(), res.cas_params.tensors.begin(),
                                res.cas_params.tensors.end());
    const std::size_t pre_count = res.pre_params.tensors.size();

    auto split_joint = [&](const ModelParams<float>& jp, ModelParams<float>& p,
                           ModelParams<float>& c) {
        for (std::size_t i = 0; i < jp.tensors.size(); ++i) {
            if (i < pre_count)
                p.tensors[i] = jp.tensors[i];
            else
                c.tensors[i - pre_count] = jp.tensors[i];
        }
    };

    auto composed_forward = [&](const TrainSample& s, const ModelParams<float>& p,
                                const ModelParams<float>& c, nn::ForwardCache<float>* cache_pre,
                                nn::ForwardCache<float>* cache_cas) {
        Tensor<float> mid = prednn_rows_forward(s, pre, p, cfg.pre_cfg.n_ici, cache_pre);
        mid.shape = {s.h_bar.K, s.h_bar.T, 2};
        return nn::forward(cas, c, mid, cache_cas);
    };

    // kept in sync with joint_params after every optimizer step; sample
    // lambdas only read them
    ModelParams<float> cur_pre = res.pre_params;
    ModelParams<float> cur_cas = res.cas_params;
    res.trace = run_minibatch_training(
        train.size(), val.size(), cfg, /*shuffle_stream=*/3, joint_params, joint,
        [&](int i, double scale, ModelParams<float>& grads) {
            const TrainSample& s = train.items[i];
            nn::ForwardCache<float> cache_pre, cache_cas;
            const Tensor<float> out = composed_forward(s, cur_pre, cur_cas, &cache_pre, &cache_cas);
            const Tensor<float> target = grid_target_rows(s.h_bar);

            ModelParams<float> gpre = ModelParams<float>::zeros_like(pre);
            ModelParams<float> gcas = ModelParams<float>::zeros_like(cas);
            Tensor<float> gmid =
                nn::backward(cas, cur_cas, cache_cas, loss_upstream(out, target, scale), gcas);
            gmid.shape = {s.h_bar.K * s.h_bar.T, 2};
            nn::backward(pre, cur_pre, cache_pre, gmid, gpre);

            for (std::size_t ti = 0; ti < grads.tensors.size(); ++ti) {
                const auto& src =
                    ti < pre_count ? gpre.tensors[ti].data : gcas.tensors[ti - pre_count].data;
                auto& dst = grads.tensors[ti].data;
                for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
            }
            return squared_error(out, target);
        },
        [&](int i) {
            const Tensor<float> out =
                composed_forward(val.items[i], cur_pre, cur_cas, nullptr, nullptr);
            return squared_error(out, grid_target_rows(val.items[i].h_bar));
        },
        [&] { split_joint(joint_params, cur_pre, cur_cas); });

    split_joint(joint_params, res.pre_params, res.cas_params);
    return res;
}

CasOnlyResult train_casresnet_only(const TrainingSet& train, const TrainingSet& val,
                                   const TrainConfig& cfg) {
    CasOnlyResult res;
    const nn::Model cas = build_casresnet_model(cfg.cas_cfg);
    res.cas_params = nn::init_params<float>(cas, derive_seed(cfg.seed, kStreamInitCas));

    auto input_image = [&](const TrainSample& s) { return grid_to_image<float>(s.h_hat); };

    res.trace = run_minibatch_training(
        train.size(), val.size(), cfg, /*shuffle_stream=*/4, res.cas_params, cas,
        [&](int i, double scale, ModelParams<float>& grads) {
            nn::ForwardCache<float> cache;
            const Tensor<float> out = nn::forward(cas, res.cas_params, input_image(train.items[i]), &cache);
            const Tensor<float> target = grid_target_rows(train.items[i].h_bar);
            nn::backward(cas, res.cas_params, cache, loss_upstream(out, target, scale), grads);
            return squared_error(out, target);
        },
        [&](int i) {
            const Tensor<float> out = nn::forward(cas, res.cas_params, input_image(val.items[i]));
            return squared_error(out, grid_target_rows(val.items[i].h_bar));
        });
    return res;
}

double prednn_grid_mse(const TrainingSet& set, const nn::Model& pre,
                       const nn::ModelParams<float>& pre_params, const PreDnnConfig& cfg) {
    if (set.items.empty()) throw std::invalid_argument("prednn_grid_mse: empty set");
    std::vector<double> mse(set.size(), 0.0);
    parallel_for(set.size(), [&](int i, int) {
        const TrainSample& s = set.items[i];
        const ComplexGrid h = prednn_refine(s.y, s.x_hat, s.h_hat, pre, pre_params, cfg);
        mse[i] = grid_mse(h, s.h_bar);
    });
    return std::accumulate(mse.begin(), mse.end(), 0.0) / set.size();
}

}  // namespace icilab::net
