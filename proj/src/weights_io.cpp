#include "icilab/harness/weights_io.hpp"

#include "io_util.hpp"

namespace icilab::harness {

namespace {
constexpr std::uint32_t kVersion = 1;
}

void write_weights(const std::string& path, const WeightsFile& wf) {
    std::string buf;
    buf.append("ICIW", 4);
    detail::put_u32(buf, kVersion);
    detail::put_u32(buf, wf.n_ici);
    detail::put_u32(buf, wf.hidden_units);
    detail::put_u32(buf, static_cast<std::uint32_t>(wf.tensors.size()));
    for (const auto& [name, t] : wf.tensors) {
        detail::put_u32(buf, static_cast<std::uint32_t>(name.size()));
        buf.append(name);
        detail::put_u32(buf, static_cast<std::uint32_t>(t.shape.size()));
        for (int d : t.shape) detail::put_u32(buf, static_cast<std::uint32_t>(d));
        for (float v : t.data) detail::put_f32(buf, v);
    }
    detail::atomic_write(path, buf);
}

WeightsFile read_weights(const std::string& path) {
    detail::Reader r(path);
    r.expect_magic("ICIW");
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw std::runtime_error(path + ": unsupported weights version " + std::to_string(version));

    WeightsFile wf;
    wf.n_ici = r.u32();
    wf.hidden_units = r.u32();
    const std::uint32_t count = r.u32();
    wf.tensors.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::string name = r.bytes(r.u32());
        const std::uint32_t rank = r.u32();
        std::vector<int> shape(rank);
        for (auto& d : shape) d = static_cast<int>(r.u32());
        nn::Tensor<float> t(shape);
        r.f32_block(t.data.data(), t.data.size());
        wf.tensors.emplace_back(name, std::move(t));
    }
    return wf;
}

void pack_params(WeightsFile& wf, const std::string& prefix, const nn::ModelParams<float>& params) {
    for (std::size_t i = 0; i < params.tensors.size(); ++i)
        wf.tensors.emplace_back(prefix + "." + params.names[i], params.tensors[i]);
}

nn::ModelParams<float> unpack_params(const WeightsFile& wf, const std::string& prefix,
                                     const nn::Model& model) {
    nn::ModelParams<float> params = nn::ModelParams<float>::zeros_like(model);
    for (std::size_t i = 0; i < params.tensors.size(); ++i) {
        const std::string want = prefix + "." + params.names[i];
        bool found = false;
        for (const auto& [name, t] : wf.tensors) {
            if (name != want) continue;
            if (t.shape != params.tensors[i].shape)
                throw std::runtime_error("checkpoint tensor '" + want + "' has wrong shape");
            params.tensors[i] = t;
            found = true;
            break;
        }
        if (!found) throw std::runtime_error("checkpoint is missing tensor '" + want + "'");
    }
    return params;
}

}  // namespace icilab::harness
