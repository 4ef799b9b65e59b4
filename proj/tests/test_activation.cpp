#include <doctest.h>

#include <cmath>

#include "vnn/activation.hpp"

using namespace vnn;

namespace {

VariationalActivation with_coeffs(const BasisFamily& family, ActMode mode, std::size_t width,
                                  const std::vector<double>& column) {
    VariationalActivation act;
    act.family = family;
    act.mode = mode;
    act.width = width;
    const std::size_t cols = mode == ActMode::layer ? 1 : width;
    act.coeffs = Mat(family.size, cols);
    for (std::size_t i = 0; i < family.size; ++i) {
        for (std::size_t j = 0; j < cols; ++j) act.coeffs(i, j) = column[i];
    }
    return act;
}

}  // namespace

TEST_CASE("one-hot classic coefficients reproduce fixed activations") {
    const BasisFamily classic = make_family(BasisKind::classic, 4);
    const auto identity = with_coeffs(classic, ActMode::layer, 2, {1, 0, 0, 0});
    const Vec out = activate(identity, {0.5, -2.0});
    CHECK(out[0] == 0.5);
    CHECK(out[1] == -2.0);

    const auto tanh_hot = with_coeffs(classic, ActMode::layer, 1, {0, 1, 0, 0});
    CHECK(activate(tanh_hot, {0.0})[0] == 0.0);

    const auto mix = with_coeffs(classic, ActMode::layer, 1, {0.5, 0.5, 0, 0});
    // 0.5 * 1 + 0.5 * tanh(1)
    CHECK(activate(mix, {1.0})[0] == doctest::Approx(0.8807970779778824).epsilon(1e-15));
}

TEST_CASE("activation derivative pinned examples") {
    const auto linear = with_coeffs(make_family(BasisKind::polynomial, 2), ActMode::layer, 1,
                                    {0, 1});
    CHECK(activate_deriv(linear, {7.0})[0] == 1.0);

    const auto relu_hot = with_coeffs(make_family(BasisKind::classic, 4), ActMode::layer, 1,
                                      {0, 0, 0, 1});
    CHECK(activate_deriv(relu_hot, {-3.0})[0] == 0.0);

    const auto four = with_coeffs(make_family(BasisKind::fourier, 3, 1.0), ActMode::layer, 1,
                                  {0, 1, 1});
    // cos(0.3) - sin(0.3)
    CHECK(activate_deriv(four, {0.3})[0] == doctest::Approx(0.6598162824642664).epsilon(1e-15));
}

TEST_CASE("activation is linear in the coefficients") {
    const BasisFamily f = make_family(BasisKind::fourier, 4, 1.0);
    Rng rng(3);
    const Vec nets = {0.2, -0.9, 1.4};
    VariationalActivation a = make_activation(f, ActMode::neuron, 3, rng);
    VariationalActivation b = make_activation(f, ActMode::neuron, 3, rng);
    VariationalActivation sum = a;
    for (std::size_t k = 0; k < sum.coeffs.data.size(); ++k) {
        sum.coeffs.data[k] += b.coeffs.data[k];
    }
    const Vec va = activate(a, nets);
    const Vec vb = activate(b, nets);
    const Vec vs = activate(sum, nets);
    for (std::size_t j = 0; j < nets.size(); ++j) {
        CHECK(vs[j] == doctest::Approx(va[j] + vb[j]).epsilon(1e-12));
    }
}

TEST_CASE("neuron mode with identical columns matches layer mode bitwise") {
    const BasisFamily f = make_family(BasisKind::polynomial, 3);
    const std::vector<double> column = {0.3, -1.1, 0.25};
    const auto layer = with_coeffs(f, ActMode::layer, 4, column);
    const auto neuron = with_coeffs(f, ActMode::neuron, 4, column);
    const Vec nets = {0.1, -0.5, 2.0, 1.3};
    const Vec a = activate(layer, nets);
    const Vec b = activate(neuron, nets);
    for (std::size_t j = 0; j < nets.size(); ++j) CHECK(a[j] == b[j]);
    const Vec da = activate_deriv(layer, nets);
    const Vec db = activate_deriv(neuron, nets);
    for (std::size_t j = 0; j < nets.size(); ++j) CHECK(da[j] == db[j]);
}

TEST_CASE("activate_deriv matches finite differences per neuron") {
    const BasisFamily f = make_family(BasisKind::fourier, 5, 1.9);
    Rng rng(11);
    const VariationalActivation act = make_activation(f, ActMode::neuron, 3, rng);
    const double h = 1e-6;
    Vec nets = {0.4, -1.7, 0.9};
    const Vec deriv = activate_deriv(act, nets);
    for (std::size_t j = 0; j < nets.size(); ++j) {
        Vec plus = nets, minus = nets;
        plus[j] += h;
        minus[j] -= h;
        const double fd = (activate(act, plus)[j] - activate(act, minus)[j]) / (2 * h);
        CHECK(deriv[j] == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("default coefficients start near a conventional activation") {
    Rng rng(5);
    const auto classic = default_coefficients(make_family(BasisKind::classic, 4),
                                              ActMode::layer, 3, rng);
    CHECK(classic(0, 0) == 0.0);
    CHECK(classic(1, 0) == 1.0);  // tanh
    CHECK(classic(2, 0) == 0.0);
    CHECK(classic(3, 0) == 0.0);

    const auto poly = default_coefficients(make_family(BasisKind::polynomial, 4),
                                           ActMode::layer, 3, rng);
    CHECK(poly(1, 0) == 1.0);  // x
    CHECK(std::abs(poly(0, 0)) <= 0.5 / 4);

    const auto fourier = default_coefficients(make_family(BasisKind::fourier, 3, 2.0),
                                              ActMode::layer, 3, rng);
    CHECK(fourier(1, 0) == 0.5);  // 1/omega on sin(wx)
}

TEST_CASE("length and shape mismatches are rejected") {
    const auto act = with_coeffs(make_family(BasisKind::polynomial, 2), ActMode::layer, 2,
                                 {0, 1});
    CHECK_THROWS_AS(activate(act, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(activate_deriv(act, {1.0, 2.0, 3.0}), std::invalid_argument);
}
