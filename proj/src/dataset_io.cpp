#include "icilab/harness/dataset_io.hpp"

#include "io_util.hpp"

namespace icilab::harness {

namespace {
constexpr std::uint32_t kVersion = 1;

void put_grid(std::string& buf, const std::vector<std::complex<float>>& g, std::size_t expected) {
    if (g.size() != expected) throw std::invalid_argument("write_dataset: grid size mismatch");
    for (const auto& v : g) {
        detail::put_f32(buf, v.real());
        detail::put_f32(buf, v.imag());
    }
}

std::vector<std::complex<float>> take_grid(detail::Reader& r, std::size_t n) {
    std::vector<std::complex<float>> g(n);
    r.f32_block(reinterpret_cast<float*>(g.data()), n * 2);
    return g;
}
}  // namespace

void write_dataset(const std::string& path, const DatasetFile& ds) {
    ds.pattern.validate(ds.grid_k, ds.grid_t);
    const std::size_t cells = static_cast<std::size_t>(ds.grid_k) * ds.grid_t;

    std::string buf;
    buf.reserve(64 + ds.items.size() * cells * 24);
    buf.append("ICIN", 4);
    detail::put_u32(buf, kVersion);
    detail::put_u32(buf, static_cast<std::uint32_t>(ds.grid_k));
    detail::put_u32(buf, static_cast<std::uint32_t>(ds.grid_t));
    detail::put_u32(buf, static_cast<std::uint32_t>(ds.items.size()));

    detail::put_u32(buf, static_cast<std::uint32_t>(ds.pattern.num_pilot_subcarriers()));
    detail::put_u32(buf, static_cast<std::uint32_t>(ds.pattern.num_pilot_symbols()));
    for (int k : ds.pattern.subcarrier_idx) detail::put_u32(buf, static_cast<std::uint32_t>(k));
    for (int t : ds.pattern.symbol_idx) detail::put_u32(buf, static_cast<std::uint32_t>(t));
    for (const cd& v : ds.pattern.values) {
        detail::put_f32(buf, static_cast<float>(v.real()));
        detail::put_f32(buf, static_cast<float>(v.imag()));
    }
    detail::put_f32(buf, ds.noise_var);

    for (const DatasetItem& it : ds.items) {
        put_grid(buf, it.x, cells);
        put_grid(buf, it.y, cells);
        put_grid(buf, it.h_bar, cells);
    }
    detail::atomic_write(path, buf);
}

DatasetFile read_dataset(const std::string& path) {
    detail::Reader r(path);
    r.expect_magic("ICIN");
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw std::runtime_error(path + ": unsupported dataset version " + std::to_string(version));

    DatasetFile ds;
    ds.grid_k = static_cast<int>(r.u32());
    ds.grid_t = static_cast<int>(r.u32());
    const std::uint32_t n = r.u32();

    const std::uint32_t kp = r.u32();
    const std::uint32_t tp = r.u32();
    ds.pattern.subcarrier_idx.resize(kp);
    for (auto& k : ds.pattern.subcarrier_idx) k = static_cast<int>(r.u32());
    ds.pattern.symbol_idx.resize(tp);
    for (auto& t : ds.pattern.symbol_idx) t = static_cast<int>(r.u32());
    ds.pattern.values.resize(static_cast<std::size_t>(kp) * tp);
    for (cd& v : ds.pattern.values) {
        const float re = r.f32();
        const float im = r.f32();
        v = cd(re, im);
    }
    ds.noise_var = r.f32();
    ds.pattern.validate(ds.grid_k, ds.grid_t);

    const std::size_t cells = static_cast<std::size_t>(ds.grid_k) * ds.grid_t;
    ds.items.resize(n);
    for (DatasetItem& it : ds.items) {
        it.x = take_grid(r, cells);
        it.y = take_grid(r, cells);
        it.h_bar = take_grid(r, cells);
    }
    return ds;
}

ComplexGrid item_grid(const std::vector<std::complex<float>>& v, int k, int t) {
    if (v.size() != static_cast<std::size_t>(k) * t)
        throw std::invalid_argument("item_grid: size mismatch");
    ComplexGrid g(k, t);
    for (std::size_t i = 0; i < v.size(); ++i) g.data[i] = cd(v[i].real(), v[i].imag());
    return g;
}

}  // namespace icilab::harness
