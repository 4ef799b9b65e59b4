#include "vnn/activation.hpp"

#include <stdexcept>

namespace vnn {

namespace {

void check_lengths(const VariationalActivation& act, const Vec& nets) {
    if (nets.size() != act.width) {
        throw std::invalid_argument("activation: expected " + std::to_string(act.width) +
                                    " pre-activations, got " + std::to_string(nets.size()));
    }
    const std::size_t want_cols = act.mode == ActMode::layer ? 1 : act.width;
    if (act.coeffs.rows != act.family.size || act.coeffs.cols != want_cols) {
        throw std::invalid_argument("activation: coefficient matrix has wrong shape");
    }
}

// Index of the member closest to identity, 0-based; returns M when the
// family has none (classic handled separately).
std::size_t identity_row(const BasisFamily& family) {
    switch (family.kind) {
        case BasisKind::polynomial:
        case BasisKind::fourier:
            return family.size >= 2 ? 1 : family.size;
        case BasisKind::classic:
            return 0;
    }
    return family.size;
}

}  // namespace

const char* act_mode_name(ActMode mode) {
    return mode == ActMode::layer ? "layer" : "neuron";
}

ActMode act_mode_from_name(const std::string& name) {
    if (name == "layer") return ActMode::layer;
    if (name == "neuron") return ActMode::neuron;
    throw std::invalid_argument("unknown activation mode '" + name + "'");
}

Mat default_coefficients(const BasisFamily& family, ActMode mode, std::size_t width, Rng& rng) {
    const std::size_t cols = mode == ActMode::layer ? 1 : width;
    const std::size_t m = family.size;
    Mat coeffs(m, cols, 0.0);

    if (family.kind == BasisKind::classic) {
        // one-hot on tanh, or on identity when M = 1
        const std::size_t hot = m >= 2 ? 1 : 0;
        for (std::size_t j = 0; j < cols; ++j) coeffs(hot, j) = 1.0;
        return coeffs;
    }

    const std::size_t id_row = identity_row(family);
    const double id_value = family.kind == BasisKind::fourier ? 1.0 / family.omega : 1.0;
    const double span = 0.5 / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            coeffs(i, j) = i == id_row ? id_value : rng.uniform(-span, span);
        }
    }
    return coeffs;
}

VariationalActivation make_activation(const BasisFamily& family, ActMode mode,
                                      std::size_t width, Rng& rng) {
    if (width < 1) throw std::invalid_argument("activation: width must be >= 1");
    VariationalActivation act;
    act.family = family;
    act.mode = mode;
    act.width = width;
    act.coeffs = default_coefficients(family, mode, width, rng);
    return act;
}

Vec activate(const VariationalActivation& act, const Vec& nets) {
    check_lengths(act, nets);
    Vec out(act.width, 0.0);
    for (std::size_t j = 0; j < act.width; ++j) {
        const std::size_t col = act.mode == ActMode::layer ? 0 : j;
        double acc = 0.0;
        for (std::size_t i = 0; i < act.family.size; ++i) {
            acc += act.coeffs(i, col) * eval_basis(act.family, i + 1, nets[j]);
        }
        out[j] = acc;
    }
    return out;
}

Vec activate_deriv(const VariationalActivation& act, const Vec& nets) {
    check_lengths(act, nets);
    Vec out(act.width, 0.0);
    for (std::size_t j = 0; j < act.width; ++j) {
        const std::size_t col = act.mode == ActMode::layer ? 0 : j;
        double acc = 0.0;
        for (std::size_t i = 0; i < act.family.size; ++i) {
            acc += act.coeffs(i, col) * eval_basis_deriv(act.family, i + 1, nets[j]);
        }
        out[j] = acc;
    }
    return out;
}

double activation_value_at(const VariationalActivation& act, std::size_t col, double x) {
    if (col >= act.coeffs.cols) throw std::out_of_range("activation: column out of range");
    double acc = 0.0;
    for (std::size_t i = 0; i < act.family.size; ++i) {
        acc += act.coeffs(i, col) * eval_basis(act.family, i + 1, x);
    }
    return acc;
}

double activation_deriv_at(const VariationalActivation& act, std::size_t col, double x) {
    if (col >= act.coeffs.cols) throw std::out_of_range("activation: column out of range");
    double acc = 0.0;
    for (std::size_t i = 0; i < act.family.size; ++i) {
        acc += act.coeffs(i, col) * eval_basis_deriv(act.family, i + 1, x);
    }
    return acc;
}

}  // namespace vnn
