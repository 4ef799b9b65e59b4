#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "vnn/backprop.hpp"

using namespace vnn;
using vnn::testing::make_case;
using vnn::testing::max_abs_diff;
using vnn::testing::SweepCase;

namespace {

void fill(Mat& m, double v) {
    for (double& e : m.data) e = v;
}

Network scalar_identity_chain() {
    Network net = make_network({1, 1, 1}, make_family(BasisKind::polynomial, 2),
                               ActMode::layer, Scaling::identity, 0);
    fill(net.hidden[0].weights, 1.0);
    fill(net.out_weights, 1.0);
    net.hidden[0].bias = {0.0};
    net.out_bias = {0.0};
    net.hidden[0].act.coeffs(0, 0) = 0.0;
    net.hidden[0].act.coeffs(1, 0) = 1.0;
    return net;
}

}  // namespace

TEST_CASE("zero output weights give zero coefficient gradients for the last layer") {
    Network net = make_network({2, 3, 2}, make_family(BasisKind::fourier, 4, 1.0),
                               ActMode::layer, Scaling::identity, 3);
    fill(net.out_weights, 0.0);
    const ForwardTrace trace = forward(net, {0.4, -0.6});
    const GradientSet grads = backward(net, trace, {1.0, 1.0}, LossKind::mse);
    for (double v : grads.d_alpha[0].data) CHECK(v == 0.0);
}

TEST_CASE("scalar identity network has the hand-derived coefficient gradient") {
    const Network net = scalar_identity_chain();
    const ForwardTrace trace = forward(net, {1.0});
    CHECK(trace.output[0] == 1.0);
    const GradientSet grads = backward(net, trace, {0.0}, LossKind::mse);
    // dE/dalpha_i = f_i(net) * u with u = 1: (f_1(1), f_2(1)) = (1, 1)
    CHECK(grads.d_alpha[0](0, 0) == 1.0);
    CHECK(grads.d_alpha[0](1, 0) == 1.0);
}

TEST_CASE("backward matches finite differences on a small sweep") {
    const SweepCase cases[] = {
        make_case(51, BasisKind::fourier, 4, ActMode::layer, false, 2, false),
        make_case(52, BasisKind::polynomial, 3, ActMode::neuron, true, 1, false),
        make_case(53, BasisKind::classic, 4, ActMode::neuron, false, 2, true),
    };
    for (const SweepCase& c : cases) {
        CAPTURE(c.label);
        const CheckReport report = check_gradients(c.net, c.samples, c.kind);
        CHECK_MESSAGE(report.ok(), format_report(report));
    }
}

TEST_CASE("closed-form layer pipeline equals the recursion") {
    for (std::uint64_t seed = 60; seed < 66; ++seed) {
        const SweepCase c = make_case(seed, seed % 2 ? BasisKind::fourier : BasisKind::polynomial,
                                      4, ActMode::layer, seed % 3 == 0, 3, seed % 3 == 1);
        const ForwardTrace trace = forward(c.net, c.samples[0].first);
        const GradientSet grads = backward(c.net, trace, c.samples[0].second, c.kind);
        for (std::size_t l = 0; l < c.net.depth(); ++l) {
            const Vec closed =
                alpha_grad_layer_closed_form(c.net, trace, c.samples[0].second, c.kind, l);
            REQUIRE(closed.size() == grads.d_alpha[l].rows);
            for (std::size_t i = 0; i < closed.size(); ++i) {
                CAPTURE(c.label);
                CHECK(std::abs(closed[i] - grads.d_alpha[l](i, 0)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("closed-form neuron pipeline equals the recursion") {
    for (std::uint64_t seed = 70; seed < 76; ++seed) {
        const SweepCase c = make_case(seed, seed % 2 ? BasisKind::fourier : BasisKind::classic,
                                      4, ActMode::neuron, seed % 3 == 0, 2, false);
        const ForwardTrace trace = forward(c.net, c.samples[0].first);
        const GradientSet grads = backward(c.net, trace, c.samples[0].second, c.kind);
        for (std::size_t l = 0; l < c.net.depth(); ++l) {
            const Mat closed =
                alpha_grad_neuron_closed_form(c.net, trace, c.samples[0].second, c.kind, l);
            CAPTURE(c.label);
            CHECK(max_abs_diff(closed, grads.d_alpha[l]) <= 1e-12);
        }
    }
}

TEST_CASE("closed forms reject the wrong mode and handle edge cases") {
    const SweepCase layer_case = make_case(80, BasisKind::fourier, 3, ActMode::layer, false, 1,
                                           false);
    const ForwardTrace trace = forward(layer_case.net, layer_case.samples[0].first);
    CHECK_THROWS_AS(alpha_grad_neuron_closed_form(layer_case.net, trace,
                                                  layer_case.samples[0].second, layer_case.kind,
                                                  0),
                    std::invalid_argument);
    CHECK_THROWS_AS(alpha_grad_layer_closed_form(layer_case.net, trace,
                                                 layer_case.samples[0].second, layer_case.kind,
                                                 7),
                    std::out_of_range);

    // zero output gradient (output == target, identity + mse) gives a zero vector
    Network net = scalar_identity_chain();
    const ForwardTrace t2 = forward(net, {1.0});
    const Vec zero = alpha_grad_layer_closed_form(net, t2, t2.output, LossKind::mse, 0);
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
}

TEST_CASE("width-1 neuron-mode layer equals the layer-mode gradient") {
    Network neuron_net = make_network({2, 1, 2}, make_family(BasisKind::fourier, 4, 1.0),
                                      ActMode::neuron, Scaling::identity, 91);
    Network layer_net = neuron_net;
    layer_net.hidden[0].act.mode = ActMode::layer;

    const Vec x = {0.7, -0.2};
    const Vec t = {0.1, 0.4};
    const ForwardTrace tn = forward(neuron_net, x);
    const ForwardTrace tl = forward(layer_net, x);
    const Mat n = alpha_grad_neuron_closed_form(neuron_net, tn, t, LossKind::mse, 0);
    const Vec l = alpha_grad_layer_closed_form(layer_net, tl, t, LossKind::mse, 0);
    for (std::size_t i = 0; i < l.size(); ++i) CHECK(n(i, 0) == doctest::Approx(l[i]));
}

TEST_CASE("tied coefficients: layer gradient is the column sum of the neuron gradient") {
    for (std::uint64_t seed = 95; seed < 99; ++seed) {
        Network neuron_net = make_network({3, 4, 3, 2},
                                          make_family(BasisKind::polynomial, 3), ActMode::neuron,
                                          Scaling::identity, seed);
        // tie: every neuron column equals the first
        for (Layer& layer : neuron_net.hidden) {
            for (std::size_t i = 0; i < layer.act.coeffs.rows; ++i) {
                for (std::size_t j = 1; j < layer.act.coeffs.cols; ++j) {
                    layer.act.coeffs(i, j) = layer.act.coeffs(i, 0);
                }
            }
        }
        Network layer_net = neuron_net;
        for (Layer& layer : layer_net.hidden) {
            Mat column(layer.act.coeffs.rows, 1);
            for (std::size_t i = 0; i < column.rows; ++i) column(i, 0) = layer.act.coeffs(i, 0);
            layer.act.mode = ActMode::layer;
            layer.act.coeffs = column;
        }

        const Vec x = {0.3, -0.4, 0.8};
        const Vec t = {0.0, 1.0};
        const GradientSet gn = backward(neuron_net, forward(neuron_net, x), t, LossKind::mse);
        const GradientSet gl = backward(layer_net, forward(layer_net, x), t, LossKind::mse);
        for (std::size_t l = 0; l < neuron_net.depth(); ++l) {
            for (std::size_t i = 0; i < gn.d_alpha[l].rows; ++i) {
                double row_sum = 0.0;
                for (std::size_t j = 0; j < gn.d_alpha[l].cols; ++j) {
                    row_sum += gn.d_alpha[l](i, j);
                }
                CHECK(std::abs(row_sum - gl.d_alpha[l](i, 0)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("frozen layers report zero coefficient gradients but keep propagating") {
    SweepCase c = make_case(101, BasisKind::fourier, 4, ActMode::layer, false, 2, false);
    Network frozen = c.net;
    frozen.hidden[0].trainable_alpha = false;

    const ForwardTrace t_live = forward(c.net, c.samples[0].first);
    const ForwardTrace t_frozen = forward(frozen, c.samples[0].first);
    const GradientSet live = backward(c.net, t_live, c.samples[0].second, c.kind);
    const GradientSet cold = backward(frozen, t_frozen, c.samples[0].second, c.kind);

    for (double v : cold.d_alpha[0].data) CHECK(v == 0.0);
    CHECK(max_abs_diff(live.d_weights[0], cold.d_weights[0]) == 0.0);
    CHECK(max_abs_diff(live.d_alpha[1], cold.d_alpha[1]) == 0.0);
}

TEST_CASE("batch gradients are the mean of per-sample gradients") {
    const SweepCase c = make_case(111, BasisKind::fourier, 3, ActMode::layer, false, 2, false);
    const Sample& s0 = c.samples[0];
    const Sample& s1 = c.samples[1];

    const GradientSet single = backward(c.net, forward(c.net, s0.first), s0.second, c.kind);
    const GradientSet batch1 = batch_backward(c.net, {s0}, c.kind);
    CHECK(max_abs_diff(single.d_weights[0], batch1.d_weights[0]) == 0.0);
    CHECK(max_abs_diff(single.d_alpha[0], batch1.d_alpha[0]) == 0.0);

    const GradientSet twice = batch_backward(c.net, {s0, s0}, c.kind);
    CHECK(max_abs_diff(single.d_weights[0], twice.d_weights[0]) <= 1e-15);

    const GradientSet pair = batch_backward(c.net, {s0, s1}, c.kind);
    GradientSet mean = zeros_like(c.net);
    add_scaled(mean, single, 0.5);
    add_scaled(mean, backward(c.net, forward(c.net, s1.first), s1.second, c.kind), 0.5);
    CHECK(max_abs_diff(mean.d_weights[0], pair.d_weights[0]) <= 1e-15);
    CHECK(max_abs_diff(mean.d_out_weights, pair.d_out_weights) <= 1e-15);
    CHECK(max_abs_diff(mean.d_alpha[1], pair.d_alpha[1]) <= 1e-15);

    CHECK_THROWS_AS(batch_backward(c.net, {}, c.kind), std::invalid_argument);
}
