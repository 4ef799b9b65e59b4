#include "vnn/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace vnn {

namespace {

Mat glorot_weights(std::size_t in, std::size_t out, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
    Mat w(in, out);
    for (std::size_t r = 0; r < in; ++r) {
        for (std::size_t c = 0; c < out; ++c) w(r, c) = rng.uniform(-bound, bound);
    }
    return w;
}

}  // namespace

Network make_network(const std::vector<std::size_t>& widths, const BasisFamily& family,
                     ActMode mode, Scaling scaling, std::uint64_t seed,
                     bool variational_output) {
    if (widths.size() < 3) {
        throw std::invalid_argument("network needs widths [in, hidden..., out]");
    }
    for (std::size_t w : widths) {
        if (w == 0) throw std::invalid_argument("network widths must be positive");
    }

    Rng rng(seed);
    Network net;
    net.scaling = scaling;
    net.seed = seed;

    for (std::size_t l = 0; l + 2 < widths.size(); ++l) {
        Layer layer;
        layer.weights = glorot_weights(widths[l], widths[l + 1], rng);
        layer.bias = Vec(widths[l + 1], 0.0);
        layer.act = make_activation(family, mode, widths[l + 1], rng);
        net.hidden.push_back(std::move(layer));
    }

    const std::size_t last_hidden = widths[widths.size() - 2];
    const std::size_t out = widths.back();
    net.out_weights = glorot_weights(last_hidden, out, rng);
    net.out_bias = Vec(out, 0.0);
    if (variational_output) {
        net.out_act = make_activation(family, ActMode::layer, out, rng);
    }
    return net;
}

ForwardTrace forward(const Network& net, const Vec& x) {
    if (net.hidden.empty()) throw std::invalid_argument("forward: network has no hidden layers");
    if (x.size() != net.input_width()) {
        throw std::invalid_argument("forward: input length " + std::to_string(x.size()) +
                                    " does not match first layer width " +
                                    std::to_string(net.input_width()));
    }

    ForwardTrace trace;
    trace.input = x;
    trace.scaling = net.scaling;
    trace.nets.reserve(net.depth());
    trace.acts.reserve(net.depth());

    const Vec* prev = &trace.input;
    for (std::size_t l = 0; l < net.depth(); ++l) {
        const Layer& layer = net.hidden[l];
        Vec netv = matvec_t(layer.weights, *prev);
        for (std::size_t j = 0; j < netv.size(); ++j) netv[j] += layer.bias[j];
        if (!all_finite(netv)) {
            throw std::runtime_error("forward: non-finite pre-activation at hidden layer " +
                                     std::to_string(l + 1));
        }
        trace.nets.push_back(std::move(netv));
        Vec act = activate(layer.act, trace.nets.back());
        if (!all_finite(act)) {
            throw std::runtime_error("forward: non-finite activation at hidden layer " +
                                     std::to_string(l + 1));
        }
        trace.acts.push_back(std::move(act));
        prev = &trace.acts.back();
    }

    trace.output_net = matvec_t(net.out_weights, *prev);
    for (std::size_t j = 0; j < trace.output_net.size(); ++j) {
        trace.output_net[j] += net.out_bias[j];
    }
    if (!all_finite(trace.output_net)) {
        throw std::runtime_error("forward: non-finite pre-activation at output layer");
    }

    if (net.out_act) {
        Vec z = activate(*net.out_act, trace.output_net);
        trace.output_act_deriv = activate_deriv(*net.out_act, trace.output_net);
        trace.output = apply_scaling(net.scaling, z);
    } else {
        trace.output = apply_scaling(net.scaling, trace.output_net);
    }
    if (!all_finite(trace.output)) {
        throw std::runtime_error("forward: non-finite output");
    }
    return trace;
}

Vec predict(const Network& net, const Vec& x) { return forward(net, x).output; }

}  // namespace vnn
