#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "vnn/grad_check.hpp"

using namespace vnn;
using vnn::testing::make_case;
using vnn::testing::SweepCase;

namespace {

Network scalar_linear_net(double w) {
    Network net = make_network({1, 1, 1}, make_family(BasisKind::polynomial, 2),
                               ActMode::layer, Scaling::identity, 0);
    net.hidden[0].weights(0, 0) = w;
    net.hidden[0].bias = {0.0};
    net.hidden[0].act.coeffs(0, 0) = 0.0;
    net.hidden[0].act.coeffs(1, 0) = 1.0;
    net.out_weights(0, 0) = 1.0;
    net.out_bias = {0.0};
    return net;
}

}  // namespace

TEST_CASE("central difference is near-exact on a quadratic loss") {
    const Network net = scalar_linear_net(2.0);
    const ParamCoordinate w{ParamSite::weight, 0, 0, 0};
    // E(w) = (w x)^2 / 2 at x = 1, t = 0, so dE/dw = w = 2
    const double numeric = numeric_partial(net, {1.0}, {0.0}, LossKind::mse, w, 1e-5);
    CHECK(std::abs(numeric - 2.0) <= 1e-9);
}

TEST_CASE("zero network with zero target has zero partials everywhere") {
    Network net = make_network({2, 3, 2}, make_family(BasisKind::polynomial, 3),
                               ActMode::layer, Scaling::identity, 0);
    for (Layer& layer : net.hidden) {
        for (double& v : layer.weights.data) v = 0.0;
        for (double& v : layer.act.coeffs.data) v = 0.0;
    }
    for (double& v : net.out_weights.data) v = 0.0;
    for (const ParamCoordinate& coord : enumerate_coordinates(net)) {
        CHECK(numeric_partial(net, {0.0, 0.0}, {0.0, 0.0}, LossKind::mse, coord, 1e-5) == 0.0);
    }
}

TEST_CASE("numeric partials match backward on a random two-layer fourier network") {
    const Network net = make_network({3, 4, 3, 2}, make_family(BasisKind::fourier, 4, 1.0),
                                     ActMode::layer, Scaling::identity, 33);
    const Vec x = {0.2, -0.7, 0.5};
    const Vec t = {0.3, -0.1};
    const GradientSet grads = backward(net, forward(net, x), t, LossKind::mse);
    for (const ParamCoordinate& coord : enumerate_coordinates(net)) {
        const double a = grad_at(grads, coord);
        const double n = numeric_partial(net, x, t, LossKind::mse, coord, 1e-5);
        const double err = std::abs(a - n);
        CAPTURE(format_coordinate(coord));
        CHECK((err <= 1e-8 || err / std::max(std::abs(a), std::abs(n)) <= 1e-6));
    }
}

TEST_CASE("default settings pass on random configurations") {
    const SweepCase cases[] = {
        make_case(300, BasisKind::fourier, 6, ActMode::neuron, true, 2, false),
        make_case(301, BasisKind::polynomial, 2, ActMode::layer, false, 3, true),
        make_case(302, BasisKind::classic, 4, ActMode::layer, true, 1, false),
    };
    for (const SweepCase& c : cases) {
        const CheckReport report = check_gradients(c.net, c.samples, c.kind);
        CAPTURE(c.label);
        CHECK_MESSAGE(report.ok(), format_report(report));
        CHECK(report.n_checked == enumerate_coordinates(c.net).size());
    }
}

TEST_CASE("frozen layers pass with zero analytic against zero numeric") {
    SweepCase c = make_case(310, BasisKind::fourier, 4, ActMode::layer, false, 2, false);
    c.net.hidden[0].trainable_alpha = false;
    const CheckReport report = check_gradients(c.net, c.samples, c.kind);
    CHECK_FALSE(report.ok());
    // frozen coefficients: analytic is zero while the loss still moves
    bool frozen_alpha_failed = false;
    for (const CheckFailure& f : report.failures) {
        if (f.coord.site == ParamSite::alpha && f.coord.layer == 0) {
            frozen_alpha_failed = true;
            CHECK(f.analytic == 0.0);
        }
    }
    CHECK(frozen_alpha_failed);
}

TEST_CASE("a corrupted analytic gradient is flagged at its coordinate") {
    const SweepCase c = make_case(320, BasisKind::polynomial, 3, ActMode::layer, false, 1,
                                  false);
    GradientSet grads = batch_backward(c.net, c.samples, c.kind);
    grads.d_weights[0](0, 1) += 0.1;
    const CheckReport report = check_gradients_against(c.net, c.samples, c.kind, grads);
    REQUIRE(report.failures.size() == 1);
    CHECK(report.failures[0].coord.site == ParamSite::weight);
    CHECK(report.failures[0].coord.layer == 0);
    CHECK(report.failures[0].coord.row == 0);
    CHECK(report.failures[0].coord.col == 1);
}

TEST_CASE("subset selection is deterministic for a fixed seed") {
    const SweepCase c = make_case(330, BasisKind::fourier, 4, ActMode::neuron, false, 2, false);
    CheckSettings settings;
    settings.max_coords = 20;
    settings.seed = 9;
    const CheckReport a = check_gradients(c.net, c.samples, c.kind, settings);
    const CheckReport b = check_gradients(c.net, c.samples, c.kind, settings);
    CHECK(a.n_checked == 20);
    CHECK(a.max_rel_err == b.max_rel_err);
    CHECK(a.max_abs_err == b.max_abs_err);
    CHECK(a.worst.row == b.worst.row);
    CHECK(a.worst.col == b.worst.col);

    settings.seed = 10;
    const CheckReport other = check_gradients(c.net, c.samples, c.kind, settings);
    CHECK(other.n_checked == 20);  // different subset, same size
}

TEST_CASE("kink nudging clears the rectifier neighborhood") {
    Network net = make_network({2, 4, 2}, make_family(BasisKind::classic, 4),
                               ActMode::neuron, Scaling::identity, 41);
    // force a pre-activation to sit on the kink
    net.hidden[0].weights(0, 0) = 0.0;
    net.hidden[0].weights(1, 0) = 0.0;
    net.hidden[0].bias[0] = 0.0;
    const std::vector<Sample> samples = {{{0.5, 0.5}, {0.0, 0.0}}};
    nudge_away_from_kinks(net, samples);
    const ForwardTrace trace = forward(net, samples[0].first);
    for (const Vec& nets : trace.nets) {
        for (double v : nets) CHECK(std::abs(v) >= 1e-4);
    }
}

TEST_CASE("coordinate bookkeeping") {
    const SweepCase c = make_case(340, BasisKind::fourier, 3, ActMode::neuron, false, 1, true);
    const std::vector<ParamCoordinate> coords = enumerate_coordinates(c.net);
    std::size_t expected = 0;
    for (const Layer& layer : c.net.hidden) {
        expected += layer.weights.data.size() + layer.bias.size() + layer.act.coeffs.data.size();
    }
    expected += c.net.out_weights.data.size() + c.net.out_bias.size() +
                c.net.out_act->coeffs.data.size();
    CHECK(coords.size() == expected);

    Network probe = c.net;
    for (const ParamCoordinate& coord : coords) {
        param_ref(probe, coord) += 0.0;  // must resolve without throwing
    }
    CHECK_THROWS_AS(param_ref(probe, ParamCoordinate{ParamSite::weight, 9, 0, 0}),
                    std::out_of_range);
}
