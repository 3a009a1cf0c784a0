#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "icilab/nn/tensor.hpp"

namespace icilab::nn {

enum class LayerKind { Dense, Conv2D, ReLU, Add };

constexpr int kSkipInput = -1;  // Add source: the model input

// One layer of a feed-forward graph. Dense maps [N, in] -> [N, out];
// Conv2D maps [H, W, cin] -> [H, W, cout] with same padding and stride 1
// (weights laid out [kh, kw, cin, cout]); ReLU is elementwise; Add sums the
// running activation with the output of an earlier layer (or the input).
struct LayerSpec {
    LayerKind kind = LayerKind::ReLU;
    std::string name;
    int in = 0, out = 0;                  // Dense
    int kh = 0, kw = 0, cin = 0, cout = 0;  // Conv2D
    int skip_source = kSkipInput;         // Add: earlier layer index, or kSkipInput

    bool has_params() const { return kind == LayerKind::Dense || kind == LayerKind::Conv2D; }

    static LayerSpec dense(std::string name, int in, int out) {
        LayerSpec l;
        l.kind = LayerKind::Dense;
        l.name = std::move(name);
        l.in = in;
        l.out = out;
        return l;
    }
    static LayerSpec conv2d(std::string name, int kh, int kw, int cin, int cout) {
        LayerSpec l;
        l.kind = LayerKind::Conv2D;
        l.name = std::move(name);
        l.kh = kh;
        l.kw = kw;
        l.cin = cin;
        l.cout = cout;
        return l;
    }
    static LayerSpec relu() {
        LayerSpec l;
        l.kind = LayerKind::ReLU;
        l.name = "relu";
        return l;
    }
    static LayerSpec add(std::string name, int skip_source) {
        LayerSpec l;
        l.kind = LayerKind::Add;
        l.name = std::move(name);
        l.skip_source = skip_source;
        return l;
    }
};

// Shape+name description of one parameter tensor of a model.
struct ParamSpec {
    int layer = -1;
    bool is_bias = false;
    std::string name;
    std::vector<int> shape;
};

struct Model {
    std::vector<LayerSpec> layers;

    std::vector<ParamSpec> param_specs() const {
        std::vector<ParamSpec> specs;
        for (int i = 0; i < static_cast<int>(layers.size()); ++i) {
            const LayerSpec& l = layers[i];
            if (!l.has_params()) continue;
            ParamSpec w, b;
            w.layer = b.layer = i;
            w.name = l.name + ".weight";
            b.name = l.name + ".bias";
            b.is_bias = true;
            if (l.kind == LayerKind::Dense) {
                w.shape = {l.in, l.out};
                b.shape = {l.out};
            } else {
                w.shape = {l.kh, l.kw, l.cin, l.cout};
                b.shape = {l.cout};
            }
            specs.push_back(std::move(w));
            specs.push_back(std::move(b));
        }
        return specs;
    }

    void validate() const {
        for (int i = 0; i < static_cast<int>(layers.size()); ++i) {
            const LayerSpec& l = layers[i];
            if (l.kind == LayerKind::Add &&
                (l.skip_source < kSkipInput || l.skip_source >= i))
                throw std::invalid_argument("Model: add layer '" + l.name +
                                            "' has an invalid skip source");
        }
    }
};

// Ordered named parameter collection matching Model::param_specs().
template <class S>
struct ModelParams {
    std::vector<std::string> names;
    std::vector<Tensor<S>> tensors;

    std::int64_t total_count() const {
        std::int64_t n = 0;
        for (const auto& t : tensors) n += t.size();
        return n;
    }
    void zero_data() {
        for (auto& t : tensors)
            std::fill(t.data.begin(), t.data.end(), S(0));
    }

    static ModelParams zeros_like(const Model& model) {
        ModelParams p;
        for (const ParamSpec& s : model.param_specs()) {
            p.names.push_back(s.name);
            p.tensors.emplace_back(s.shape);
        }
        return p;
    }

    template <class S2>
    ModelParams<S2> cast() const {
        ModelParams<S2> out;
        out.names = names;
        out.tensors.reserve(tensors.size());
        for (const auto& t : tensors) {
            Tensor<S2> c(t.shape);
            for (std::size_t i = 0; i < t.data.size(); ++i) c.data[i] = static_cast<S2>(t.data[i]);
            out.tensors.push_back(std::move(c));
        }
        return out;
    }
};

// Activations recorded by forward() for use in backward(); acts[0] is the
// model input and acts[i + 1] the output of layer i.
template <class S>
struct ForwardCache {
    std::vector<Tensor<S>> acts;
    bool valid = false;
};

template <class S>
Tensor<S> forward(const Model& model, const ModelParams<S>& params, const Tensor<S>& input,
                  ForwardCache<S>* cache = nullptr);

// Gradient of a scalar loss w.r.t. parameters and input, given the upstream
// gradient d(loss)/d(output). Parameter gradients are accumulated into
// param_grads.tensors[i].data; the return value is d(loss)/d(input).
// Requires the cache of a preceding forward() call.
template <class S>
Tensor<S> backward(const Model& model, const ModelParams<S>& params, const ForwardCache<S>& cache,
                   const Tensor<S>& upstream, ModelParams<S>& param_grads);

// Convenience wrapper that accumulates parameter gradients into the grad
// buffers of `params` itself.
template <class S>
Tensor<S> backward(const Model& model, ModelParams<S>& params, const ForwardCache<S>& cache,
                   const Tensor<S>& upstream);

}  // namespace icilab::nn

#include "icilab/nn/model_impl.hpp"
