#include <doctest.h>

#include <cmath>

#include "icilab/net/casresnet.hpp"
#include "icilab/net/prednn.hpp"
#include "icilab/nn/adam.hpp"
#include "icilab/nn/counting.hpp"
#include "icilab/nn/init.hpp"
#include "icilab/nn/loss.hpp"
#include "icilab/nn/model.hpp"
#include "icilab/rng.hpp"
#include "test_support.hpp"

using namespace icilab;
using nn::LayerSpec;
using nn::Model;
using nn::ModelParams;
using nn::Tensor;

namespace {

template <class S>
Tensor<S> random_tensor(std::vector<int> shape, Rng& rng, double scale = 1.0) {
    Tensor<S> t(std::move(shape));
    for (S& v : t.data) v = static_cast<S>(rng.uniform(-scale, scale));
    return t;
}

// analytic + finite-difference agreement for loss(forward(input), target)
double fd_check(const Model& model, std::uint64_t seed, const std::vector<int>& input_shape) {
    ModelParams<double> params = nn::init_params<double>(model, seed);
    Rng rng(seed ^ 0xF00D);
    Tensor<double> input = random_tensor<double>(input_shape, rng);

    nn::ForwardCache<double> cache;
    const Tensor<double> out = nn::forward(model, params, input, &cache);
    const Tensor<double> target = random_tensor<double>(out.shape, rng);
    const auto loss = nn::mse_loss(out, target);
    ModelParams<double> grads = ModelParams<double>::zeros_like(model);
    const Tensor<double> gin = nn::backward(model, params, cache, loss.grad, grads);

    auto loss_fn = [&] {
        return nn::mse_loss(nn::forward(model, params, input), target).value;
    };
    const double werr = test::check_param_gradients(params, grads, loss_fn);
    const double ierr = test::check_input_gradient(input, gin, loss_fn);
    return std::max(werr, ierr);
}

}  // namespace

TEST_SUITE("nn_core") {

TEST_CASE("dense with identity weights passes the input through") {
    Model m;
    m.layers.push_back(LayerSpec::dense("fc", 4, 4));
    ModelParams<double> p = ModelParams<double>::zeros_like(m);
    for (int i = 0; i < 4; ++i) p.tensors[0].data[i * 4 + i] = 1.0;
    Rng rng(1);
    const Tensor<double> x = random_tensor<double>({5, 4}, rng);
    const Tensor<double> y = nn::forward(m, p, x);
    CHECK(y.data == x.data);
}

TEST_CASE("conv with zero kernel produces a constant grid of the bias") {
    Model m;
    m.layers.push_back(LayerSpec::conv2d("conv", 3, 3, 1, 1));
    ModelParams<double> p = ModelParams<double>::zeros_like(m);
    p.tensors[1].data[0] = 0.75;
    Rng rng(2);
    const Tensor<double> x = random_tensor<double>({6, 5, 1}, rng);
    const Tensor<double> y = nn::forward(m, p, x);
    CHECK(y.shape == std::vector<int>{6, 5, 1});
    for (double v : y.data) CHECK(v == 0.75);
}

TEST_CASE("conv on a 1x1 input sees only the kernel center") {
    Model m;
    m.layers.push_back(LayerSpec::conv2d("conv", 3, 3, 1, 1));
    ModelParams<double> p = ModelParams<double>::zeros_like(m);
    Rng rng(3);
    for (double& v : p.tensors[0].data) v = rng.uniform(-1, 1);
    Tensor<double> x({1, 1, 1});
    x.data[0] = 1.7;
    const Tensor<double> y = nn::forward(m, p, x);
    const double center = p.tensors[0].data[(1 * 3 + 1)];  // kh=1, kw=1, ci=0, co=0
    CHECK(y.data[0] == doctest::Approx(1.7 * center).epsilon(1e-12));
}

TEST_CASE("same padding preserves spatial shape for 3x3 and 5x5 kernels") {
    for (int kh : {3, 5})
        for (int kw : {3, 5}) {
            Model m;
            m.layers.push_back(LayerSpec::conv2d("conv", kh, kw, 2, 3));
            const ModelParams<float> p = nn::init_params<float>(m, 4);
            Rng rng(5);
            const Tensor<float> x = random_tensor<float>({7, 9, 2}, rng);
            const Tensor<float> y = nn::forward(m, p, x);
            CHECK(y.shape == std::vector<int>{7, 9, 3});
        }
}

TEST_CASE("gradients match central differences: dense") {
    Model m;
    m.layers.push_back(LayerSpec::dense("fc", 3, 2));
    CHECK(fd_check(m, 10, {4, 3}) < 1e-4);
}

TEST_CASE("gradients match central differences: dense-relu-dense") {
    Model m;
    m.layers.push_back(LayerSpec::dense("fc1", 6, 8));
    m.layers.push_back(LayerSpec::relu());
    m.layers.push_back(LayerSpec::dense("fc2", 8, 2));
    CHECK(fd_check(m, 11, {5, 6}) < 1e-4);
}

TEST_CASE("gradients match central differences: two-layer conv net") {
    Model m;
    m.layers.push_back(LayerSpec::conv2d("c1", 3, 3, 2, 4));
    m.layers.push_back(LayerSpec::relu());
    m.layers.push_back(LayerSpec::conv2d("c2", 3, 3, 4, 2));
    REQUIRE(nn::count_params(m) <= 500);
    CHECK(fd_check(m, 12, {5, 6, 2}) < 1e-4);
}

TEST_CASE("gradients match central differences: skip connections") {
    Model m;
    m.layers.push_back(LayerSpec::conv2d("c1", 3, 3, 2, 2));
    m.layers.push_back(LayerSpec::relu());
    m.layers.push_back(LayerSpec::conv2d("c2", 3, 3, 2, 2));
    m.layers.push_back(LayerSpec::add("skip_a", 0));
    m.layers.push_back(LayerSpec::conv2d("c3", 3, 3, 2, 2));
    m.layers.push_back(LayerSpec::add("skip_b", nn::kSkipInput));
    CHECK(fd_check(m, 13, {4, 4, 2}) < 1e-4);
}

TEST_CASE("identity fit has zero parameter gradient") {
    Model m;
    m.layers.push_back(LayerSpec::dense("fc", 3, 3));
    ModelParams<double> p = ModelParams<double>::zeros_like(m);
    for (int i = 0; i < 3; ++i) p.tensors[0].data[i * 3 + i] = 1.0;
    Rng rng(6);
    const Tensor<double> x = random_tensor<double>({4, 3}, rng);
    nn::ForwardCache<double> cache;
    const Tensor<double> out = nn::forward(m, p, x, &cache);
    const auto loss = nn::mse_loss(out, x);  // target == output
    CHECK(loss.value == 0.0);
    ModelParams<double> grads = ModelParams<double>::zeros_like(m);
    nn::backward(m, p, cache, loss.grad, grads);
    for (const auto& t : grads.tensors)
        for (double v : t.data) CHECK(v == 0.0);
}

TEST_CASE("mse loss values") {
    Tensor<double> a({1, 5}), b({1, 5});
    CHECK(nn::mse_loss(a, b).value == 0.0);
    for (double& v : a.data) v = 1.0;
    CHECK(nn::mse_loss(a, b).value == doctest::Approx(5.0));  // single sample, n entries of 1

    Tensor<double> p({2, 2}), t({2, 2});
    p.data = {1.0, 1.0, 2.0, 0.0};  // per-sample squared norms 2 and 4
    CHECK(nn::mse_loss(p, t).value == doctest::Approx(3.0));
    CHECK_THROWS_AS(nn::mse_loss(a, p), std::invalid_argument);
}

TEST_CASE("loss is nonnegative and zero only at equality") {
    Rng rng(7);
    Tensor<double> a = random_tensor<double>({3, 4}, rng);
    Tensor<double> b = a;
    CHECK(nn::mse_loss(a, b).value == 0.0);
    b.data[5] += 1e-3;
    CHECK(nn::mse_loss(a, b).value > 0.0);
}

TEST_CASE("adam: closed-form first step") {
    Model m;
    m.layers.push_back(LayerSpec::dense("fc", 1, 1));
    ModelParams<double> p = ModelParams<double>::zeros_like(m);
    ModelParams<double> g = ModelParams<double>::zeros_like(m);
    nn::AdamState<double> adam;
    adam.init(p);

    g.tensors[0].data[0] = 1.0;
    adam.step(p, g);
    CHECK(p.tensors[0].data[0] == doctest::Approx(-0.001 / (1.0 + 1e-8)).epsilon(1e-12));
    // bias-corrected first step is scale invariant up to epsilon
    ModelParams<double> p2 = ModelParams<double>::zeros_like(m);
    nn::AdamState<double> adam2;
    adam2.init(p2);
    g.tensors[0].data[0] = 100.0;
    adam2.step(p2, g);
    CHECK(std::abs(p2.tensors[0].data[0]) == doctest::Approx(0.001).epsilon(1e-9));
}

TEST_CASE("adam: zero gradient leaves parameters untouched") {
    Model m;
    m.layers.push_back(LayerSpec::dense("fc", 2, 2));
    ModelParams<double> p = nn::init_params<double>(m, 8);
    const auto before = p.tensors[0].data;
    ModelParams<double> g = ModelParams<double>::zeros_like(m);
    nn::AdamState<double> adam;
    adam.init(p);
    for (int i = 0; i < 3; ++i) adam.step(p, g);
    CHECK(p.tensors[0].data == before);
}

TEST_CASE("adam: non-finite gradients abort with context") {
    Model m;
    m.layers.push_back(LayerSpec::dense("fc", 1, 1));
    ModelParams<double> p = ModelParams<double>::zeros_like(m);
    ModelParams<double> g = ModelParams<double>::zeros_like(m);
    g.tensors[0].data[0] = std::nan("");
    nn::AdamState<double> adam;
    adam.init(p);
    CHECK_THROWS_AS(adam.step(p, g), std::runtime_error);
}

TEST_CASE("init: deterministic, zero biases, documented layer size") {
    Model m;
    m.layers.push_back(LayerSpec::dense("fc1", 22, 32));
    const ModelParams<float> a = nn::init_params<float>(m, 99);
    const ModelParams<float> b = nn::init_params<float>(m, 99);
    CHECK(a.tensors[0].data == b.tensors[0].data);
    CHECK(a.tensors[0].size() + a.tensors[1].size() == 736);
    for (float v : a.tensors[1].data) CHECK(v == 0.0f);
    const double bound = std::sqrt(6.0 / (22 + 32));
    for (float v : a.tensors[0].data) CHECK(std::abs(v) <= bound);
    const ModelParams<float> c = nn::init_params<float>(m, 100);
    CHECK(a.tensors[0].data != c.tensors[0].data);
}

TEST_CASE("init: float and double draws coincide") {
    Model m;
    m.layers.push_back(LayerSpec::dense("fc1", 5, 3));
    const ModelParams<float> f = nn::init_params<float>(m, 55);
    const ModelParams<double> d = nn::init_params<double>(m, 55);
    for (std::size_t i = 0; i < f.tensors[0].data.size(); ++i)
        CHECK(f.tensors[0].data[i] == static_cast<float>(d.tensors[0].data[i]));
}

TEST_CASE("counting: table values for the two fixed architectures") {
    const net::PreDnnConfig pre_cfg;  // n_ici = 2
    const Model pre = net::build_prednn_model(pre_cfg);
    const Model cas = net::build_casresnet_model({});

    CHECK(nn::count_params(cas) == 2562);
    CHECK(nn::count_macs(cas, {128, 14, 2}) == 4530176);

    CHECK(nn::count_params(pre) == 802);
    CHECK(nn::count_macs(pre, {128 * 14, pre_cfg.input_width()}) == 1376256);

    CHECK(nn::count_params(pre) + nn::count_params(cas) == 3364);
    CHECK(nn::count_macs(pre, {128 * 14, 22}) + nn::count_macs(cas, {128, 14, 2}) == 5906432);
}

TEST_CASE("counting: relu and add are free") {
    Model m;
    m.layers.push_back(LayerSpec::conv2d("c1", 3, 3, 2, 2));
    const std::int64_t base = nn::count_macs(m, {8, 8, 2});
    m.layers.push_back(LayerSpec::relu());
    m.layers.push_back(LayerSpec::add("skip", nn::kSkipInput));
    CHECK(nn::count_macs(m, {8, 8, 2}) == base);
    CHECK(nn::count_params(m) == 3 * 3 * 2 * 2 + 2);
}

TEST_CASE("shape errors name the offending layer") {
    Model m;
    m.layers.push_back(LayerSpec::dense("stage_a", 3, 2));
    const ModelParams<double> p = ModelParams<double>::zeros_like(m);
    Tensor<double> bad({2, 4});
    CHECK_THROWS_WITH_AS(nn::forward(m, p, bad), doctest::Contains("stage_a"),
                         std::invalid_argument);
}

TEST_CASE("backward without a forward cache is a state error") {
    Model m;
    m.layers.push_back(LayerSpec::dense("fc", 2, 2));
    const ModelParams<double> p = ModelParams<double>::zeros_like(m);
    ModelParams<double> g = ModelParams<double>::zeros_like(m);
    nn::ForwardCache<double> cache;  // never filled
    Tensor<double> up({3, 2});
    CHECK_THROWS_AS(nn::backward(m, p, cache, up, g), std::logic_error);
}

}  // TEST_SUITE
