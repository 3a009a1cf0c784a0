#pragma once

#include <cmath>
#include <stdexcept>

#include "icilab/nn/model.hpp"

namespace icilab::nn {

// Adam with bias correction. Moments are kept per parameter tensor in the
// same precision as the parameters.
template <class S>
struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::int64_t step_count = 0;

    std::vector<std::vector<S>> m, v;

    void init(const ModelParams<S>& params) {
        m.clear();
        v.clear();
        for (const auto& t : params.tensors) {
            m.emplace_back(t.data.size(), S(0));
            v.emplace_back(t.data.size(), S(0));
        }
        step_count = 0;
    }

    void step(ModelParams<S>& params, const ModelParams<S>& grads) {
        if (m.size() != params.tensors.size()) throw std::logic_error("AdamState: not initialized");
        ++step_count;
        const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
        const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
        for (std::size_t ti = 0; ti < params.tensors.size(); ++ti) {
            auto& p = params.tensors[ti].data;
            const auto& g = grads.tensors[ti].data;
            if (g.size() != p.size())
                throw std::invalid_argument("AdamState: gradient shape mismatch at tensor " +
                                            std::to_string(ti));
            auto& mt = m[ti];
            auto& vt = v[ti];
            for (std::size_t j = 0; j < p.size(); ++j) {
                const double gj = static_cast<double>(g[j]);
                if (!std::isfinite(gj))
                    throw std::runtime_error("AdamState: non-finite gradient in '" +
                                             params.names[ti] + "' at element " + std::to_string(j));
                const double mj = beta1 * mt[j] + (1.0 - beta1) * gj;
                const double vj = beta2 * vt[j] + (1.0 - beta2) * gj * gj;
                mt[j] = static_cast<S>(mj);
                vt[j] = static_cast<S>(vj);
                const double mhat = mj / bc1;
                const double vhat = vj / bc2;
                p[j] = static_cast<S>(p[j] - lr * mhat / (std::sqrt(vhat) + epsilon));
            }
        }
    }
};

}  // namespace icilab::nn
