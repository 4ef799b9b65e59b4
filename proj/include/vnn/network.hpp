#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vnn/activation.hpp"
#include "vnn/scaling.hpp"

namespace vnn {

struct Layer {
    Mat weights;  // in_width x out_width, entry (j, l) = w_jl
    Vec bias;     // out_width
    VariationalActivation act;  // act.width == out_width
    bool trainable_alpha = true;

    std::size_t in_width() const { return weights.rows; }
    std::size_t out_width() const { return weights.cols; }
};

struct Network {
    std::vector<Layer> hidden;  // at least one layer
    Mat out_weights;            // last hidden width x output width
    Vec out_bias;
    std::optional<VariationalActivation> out_act;  // layer mode only, off by default
    Scaling scaling = Scaling::identity;
    std::uint64_t seed = 0;  // seed the parameters were drawn from

    std::size_t depth() const { return hidden.size(); }
    std::size_t input_width() const { return hidden.front().in_width(); }
    std::size_t output_width() const { return out_weights.cols; }
    const BasisFamily& family() const { return hidden.front().act.family; }
};

// Everything one forward pass caches for the backward sweep. Recomputing
// forward from `input` reproduces every field bit for bit.
struct ForwardTrace {
    Vec input;
    std::vector<Vec> nets;  // net^(L) per hidden layer
    std::vector<Vec> acts;  // a^(L) = F^(L)(net^(L))
    Vec output_net;         // net^(O)
    Vec output_act_deriv;   // F^(O)'(net^(O)); empty when the output activation is off
    Vec output;             // scaling(F^(O)(net^(O))) or scaling(net^(O))
    Scaling scaling = Scaling::identity;
};

// widths lists the full chain [in, hidden..., out] and needs at least one
// hidden entry. Weights are Glorot-uniform in +-sqrt(6/(in+out)), biases
// zero, coefficients from default_coefficients; one seeded stream drives
// all draws layer by layer, weights before coefficients.
Network make_network(const std::vector<std::size_t>& widths, const BasisFamily& family,
                     ActMode mode, Scaling scaling, std::uint64_t seed,
                     bool variational_output = false);

ForwardTrace forward(const Network& net, const Vec& x);

Vec predict(const Network& net, const Vec& x);

}  // namespace vnn
