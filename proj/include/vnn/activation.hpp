#pragma once

#include <cstddef>
#include <string>

#include "vnn/basis.hpp"
#include "vnn/linalg.hpp"
#include "vnn/rng.hpp"

namespace vnn {

enum class ActMode { layer, neuron };

const char* act_mode_name(ActMode mode);
ActMode act_mode_from_name(const std::string& name);

// Trainable activation F(x) = sum_i alpha_i f_i(x). Layer mode shares one
// coefficient column across all neurons it serves; neuron mode keeps one
// column per neuron (column j belongs to neuron j).
struct VariationalActivation {
    BasisFamily family;
    ActMode mode = ActMode::layer;
    std::size_t width = 1;
    Mat coeffs;  // M x 1 (layer) or M x width (neuron)
};

// Default coefficients: classic starts as a one-hot on tanh (on identity
// when M = 1); other families pin the member closest to identity
// (polynomial f_2 = x with coefficient 1, fourier f_2 = sin(wx) with
// coefficient 1/w) and draw the rest uniformly from [-0.5/M, 0.5/M].
// Entries are drawn in row-major order.
Mat default_coefficients(const BasisFamily& family, ActMode mode, std::size_t width, Rng& rng);

VariationalActivation make_activation(const BasisFamily& family, ActMode mode,
                                      std::size_t width, Rng& rng);

// out_j = sum_i alpha_{(j,)i} f_i(nets_j)
Vec activate(const VariationalActivation& act, const Vec& nets);

// entry j = dF_j / dnet_j
Vec activate_deriv(const VariationalActivation& act, const Vec& nets);

// Scalar view of one neuron's activation; col is the coefficient column
// (always 0 in layer mode).
double activation_value_at(const VariationalActivation& act, std::size_t col, double x);
double activation_deriv_at(const VariationalActivation& act, std::size_t col, double x);

}  // namespace vnn
