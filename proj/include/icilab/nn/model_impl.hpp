#pragma once

// Implementation of forward/backward for the fixed layer set. Inner loops
// keep the innermost index contiguous so the compiler can vectorize them.

#include <algorithm>
#include <cstring>

namespace icilab::nn {

namespace detail {

inline std::vector<int> weight_index_per_layer(const Model& model) {
    std::vector<int> idx(model.layers.size(), -1);
    int p = 0;
    for (std::size_t i = 0; i < model.layers.size(); ++i)
        if (model.layers[i].has_params()) {
            idx[i] = p;
            p += 2;  // weight, bias
        }
    return idx;
}

template <class S>
void check_params(const Model& model, const ModelParams<S>& params) {
    const auto specs = model.param_specs();
    if (params.tensors.size() != specs.size())
        throw std::invalid_argument("model parameters: expected " + std::to_string(specs.size()) +
                                    " tensors, got " + std::to_string(params.tensors.size()));
    for (std::size_t i = 0; i < specs.size(); ++i)
        if (params.tensors[i].shape != specs[i].shape)
            throw std::invalid_argument("model parameters: shape mismatch at '" + specs[i].name + "'");
}

template <class S>
void dense_forward(const LayerSpec& l, const Tensor<S>& w, const Tensor<S>& b, const Tensor<S>& x,
                   Tensor<S>& y) {
    if (x.shape.size() != 2 || x.shape[1] != l.in)
        throw std::invalid_argument("layer '" + l.name + "': expected input [N," +
                                    std::to_string(l.in) + "], got " + shape_str(x));
    const int n = x.shape[0], in = l.in, out = l.out;
    y = Tensor<S>({n, out});
    const S* wp = w.data.data();
    const S* bp = b.data.data();
    for (int r = 0; r < n; ++r) {
        const S* xr = &x.data[static_cast<std::size_t>(r) * in];
        S* yr = &y.data[static_cast<std::size_t>(r) * out];
        std::memcpy(yr, bp, sizeof(S) * out);
        for (int i = 0; i < in; ++i) {
            const S xv = xr[i];
            const S* wr = &wp[static_cast<std::size_t>(i) * out];
            for (int o = 0; o < out; ++o) yr[o] += xv * wr[o];
        }
    }
}

template <class S>
void dense_backward(const LayerSpec& l, const Tensor<S>& w, const Tensor<S>& x, const Tensor<S>& gy,
                    Tensor<S>& gw, Tensor<S>& gb, Tensor<S>& gx) {
    const int n = x.shape[0], in = l.in, out = l.out;
    const S* wp = w.data.data();
    for (int r = 0; r < n; ++r) {
        const S* xr = &x.data[static_cast<std::size_t>(r) * in];
        const S* gr = &gy.data[static_cast<std::size_t>(r) * out];
        S* gxr = &gx.data[static_cast<std::size_t>(r) * in];
        for (int o = 0; o < out; ++o) gb.data[o] += gr[o];
        for (int i = 0; i < in; ++i) {
            const S xv = xr[i];
            const S* wr = &wp[static_cast<std::size_t>(i) * out];
            S* gwr = &gw.data[static_cast<std::size_t>(i) * out];
            S acc = S(0);
            for (int o = 0; o < out; ++o) {
                gwr[o] += xv * gr[o];
                acc += wr[o] * gr[o];
            }
            gxr[i] += acc;
        }
    }
}

template <class S>
void conv2d_forward(const LayerSpec& l, const Tensor<S>& w, const Tensor<S>& b, const Tensor<S>& x,
                    Tensor<S>& y) {
    if (x.shape.size() != 3 || x.shape[2] != l.cin)
        throw std::invalid_argument("layer '" + l.name + "': expected input [H,W," +
                                    std::to_string(l.cin) + "], got " + shape_str(x));
    const int h = x.shape[0], wd = x.shape[1];
    const int cin = l.cin, cout = l.cout;
    const int ph = l.kh / 2, pw = l.kw / 2;
    y = Tensor<S>({h, wd, cout});
    const S* xp = x.data.data();
    const S* wp = w.data.data();
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < wd; ++c) {
            S* yo = &y.data[(static_cast<std::size_t>(r) * wd + c) * cout];
            std::memcpy(yo, b.data.data(), sizeof(S) * cout);
            for (int dr = 0; dr < l.kh; ++dr) {
                const int rr = r + dr - ph;
                if (rr < 0 || rr >= h) continue;
                for (int dc = 0; dc < l.kw; ++dc) {
                    const int cc = c + dc - pw;
                    if (cc < 0 || cc >= wd) continue;
                    const S* xi = &xp[(static_cast<std::size_t>(rr) * wd + cc) * cin];
                    const S* wk = &wp[(static_cast<std::size_t>(dr) * l.kw + dc) * cin * cout];
                    for (int ci = 0; ci < cin; ++ci) {
                        const S xv = xi[ci];
                        const S* wc = &wk[static_cast<std::size_t>(ci) * cout];
                        for (int co = 0; co < cout; ++co) yo[co] += xv * wc[co];
                    }
                }
            }
        }
    }
}

template <class S>
void conv2d_backward(const LayerSpec& l, const Tensor<S>& w, const Tensor<S>& x, const Tensor<S>& gy,
                     Tensor<S>& gw, Tensor<S>& gb, Tensor<S>& gx) {
    const int h = x.shape[0], wd = x.shape[1];
    const int cin = l.cin, cout = l.cout;
    const int ph = l.kh / 2, pw = l.kw / 2;
    const S* xp = x.data.data();
    const S* wp = w.data.data();
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < wd; ++c) {
            const S* go = &gy.data[(static_cast<std::size_t>(r) * wd + c) * cout];
            for (int co = 0; co < cout; ++co) gb.data[co] += go[co];
            for (int dr = 0; dr < l.kh; ++dr) {
                const int rr = r + dr - ph;
                if (rr < 0 || rr >= h) continue;
                for (int dc = 0; dc < l.kw; ++dc) {
                    const int cc = c + dc - pw;
                    if (cc < 0 || cc >= wd) continue;
                    const std::size_t off = (static_cast<std::size_t>(rr) * wd + cc) * cin;
                    const S* xi = &xp[off];
                    S* gxi = &gx.data[off];
                    const std::size_t woff = (static_cast<std::size_t>(dr) * l.kw + dc) * cin * cout;
                    for (int ci = 0; ci < cin; ++ci) {
                        const S xv = xi[ci];
                        const S* wc = &wp[woff + static_cast<std::size_t>(ci) * cout];
                        S* gwc = &gw.data[woff + static_cast<std::size_t>(ci) * cout];
                        S acc = S(0);
                        for (int co = 0; co < cout; ++co) {
                            gwc[co] += xv * go[co];
                            acc += wc[co] * go[co];
                        }
                        gxi[ci] += acc;
                    }
                }
            }
        }
    }
}

}  // namespace detail

template <class S>
Tensor<S> forward(const Model& model, const ModelParams<S>& params, const Tensor<S>& input,
                  ForwardCache<S>* cache) {
    model.validate();
    detail::check_params(model, params);
    const auto widx = detail::weight_index_per_layer(model);

    ForwardCache<S> local;
    ForwardCache<S>& c = cache ? *cache : local;
    c.acts.clear();
    c.acts.reserve(model.layers.size() + 1);
    c.acts.push_back(input);
    c.valid = false;

    for (std::size_t i = 0; i < model.layers.size(); ++i) {
        const LayerSpec& l = model.layers[i];
        const Tensor<S>& x = c.acts.back();
        Tensor<S> y;
        switch (l.kind) {
            case LayerKind::Dense:
                detail::dense_forward(l, params.tensors[widx[i]], params.tensors[widx[i] + 1], x, y);
                break;
            case LayerKind::Conv2D:
                detail::conv2d_forward(l, params.tensors[widx[i]], params.tensors[widx[i] + 1], x, y);
                break;
            case LayerKind::ReLU:
                y = x;
                for (S& v : y.data) v = std::max(v, S(0));
                break;
            case LayerKind::Add: {
                const Tensor<S>& skip = c.acts[static_cast<std::size_t>(l.skip_source + 1)];
                if (!skip.same_shape(x))
                    throw std::invalid_argument("layer '" + l.name + "': skip shape " +
                                                shape_str(skip) + " does not match " + shape_str(x));
                y = x;
                for (std::size_t j = 0; j < y.data.size(); ++j) y.data[j] += skip.data[j];
                break;
            }
        }
        c.acts.push_back(std::move(y));
    }
    c.valid = true;
    return c.acts.back();
}

template <class S>
Tensor<S> backward(const Model& model, const ModelParams<S>& params, const ForwardCache<S>& cache,
                   const Tensor<S>& upstream, ModelParams<S>& param_grads) {
    if (!cache.valid || cache.acts.size() != model.layers.size() + 1)
        throw std::logic_error("backward: no valid forward cache");
    detail::check_params(model, params);
    detail::check_params(model, param_grads);
    if (!upstream.same_shape(cache.acts.back()))
        throw std::invalid_argument("backward: upstream gradient shape mismatch");
    const auto widx = detail::weight_index_per_layer(model);

    std::vector<Tensor<S>> gacts(cache.acts.size());
    for (std::size_t i = 0; i < gacts.size(); ++i) {
        gacts[i].shape = cache.acts[i].shape;
        gacts[i].data.assign(cache.acts[i].data.size(), S(0));
    }
    gacts.back() = upstream;

    for (int i = static_cast<int>(model.layers.size()) - 1; i >= 0; --i) {
        const LayerSpec& l = model.layers[i];
        const Tensor<S>& x = cache.acts[i];
        const Tensor<S>& gy = gacts[i + 1];
        Tensor<S>& gx = gacts[i];
        switch (l.kind) {
            case LayerKind::Dense:
                detail::dense_backward(l, params.tensors[widx[i]], x, gy,
                                       param_grads.tensors[widx[i]], param_grads.tensors[widx[i] + 1],
                                       gx);
                break;
            case LayerKind::Conv2D:
                detail::conv2d_backward(l, params.tensors[widx[i]], x, gy,
                                        param_grads.tensors[widx[i]],
                                        param_grads.tensors[widx[i] + 1], gx);
                break;
            case LayerKind::ReLU:
                for (std::size_t j = 0; j < gy.data.size(); ++j)
                    if (x.data[j] > S(0)) gx.data[j] += gy.data[j];
                break;
            case LayerKind::Add: {
                Tensor<S>& gskip = gacts[static_cast<std::size_t>(l.skip_source + 1)];
                for (std::size_t j = 0; j < gy.data.size(); ++j) {
                    gx.data[j] += gy.data[j];
                    gskip.data[j] += gy.data[j];
                }
                break;
            }
        }
    }
    return std::move(gacts[0]);
}

template <class S>
Tensor<S> backward(const Model& model, ModelParams<S>& params, const ForwardCache<S>& cache,
                   const Tensor<S>& upstream) {
    ModelParams<S> grads = ModelParams<S>::zeros_like(model);
    Tensor<S> gin = backward(model, const_cast<const ModelParams<S>&>(params), cache, upstream, grads);
    for (std::size_t i = 0; i < params.tensors.size(); ++i) {
        params.tensors[i].ensure_grad();
        for (std::size_t j = 0; j < grads.tensors[i].data.size(); ++j)
            params.tensors[i].grad[j] += grads.tensors[i].data[j];
    }
    return gin;
}

}  // namespace icilab::nn
