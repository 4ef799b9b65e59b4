#include "vnn/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vnn::baseline {

namespace {

double act_value(FixedActivation a, double x) {
    switch (a) {
        case FixedActivation::tanh_fn: return std::tanh(x);
        case FixedActivation::sigmoid_fn: return 1.0 / (1.0 + std::exp(-x));
        case FixedActivation::relu_fn: return x > 0.0 ? x : 0.0;
    }
    return 0.0;
}

double act_deriv(FixedActivation a, double x) {
    switch (a) {
        case FixedActivation::tanh_fn: {
            const double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case FixedActivation::sigmoid_fn: {
            const double s = 1.0 / (1.0 + std::exp(-x));
            return s * (1.0 - s);
        }
        case FixedActivation::relu_fn:
            return x > 0.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

struct Pass {
    std::vector<Vec> nets;
    std::vector<Vec> acts;
    Vec output_net;
    Vec output;
};

Pass run_forward(const FixedNet& net, const Vec& x) {
    if (net.weights.empty()) throw std::invalid_argument("fixed net: no hidden layers");
    if (x.size() != net.weights.front().rows) {
        throw std::invalid_argument("fixed net: input width mismatch");
    }
    Pass pass;
    const Vec* prev = &x;
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
        const Mat& w = net.weights[l];
        if (prev->size() != w.rows) throw std::invalid_argument("fixed net: width chain broken");
        Vec n(w.cols, 0.0);
        for (std::size_t j = 0; j < w.rows; ++j) {
            for (std::size_t c = 0; c < w.cols; ++c) n[c] += w(j, c) * (*prev)[j];
        }
        for (std::size_t c = 0; c < w.cols; ++c) n[c] += net.biases[l][c];
        Vec a(w.cols);
        for (std::size_t c = 0; c < w.cols; ++c) a[c] = act_value(net.activations[l], n[c]);
        pass.nets.push_back(std::move(n));
        pass.acts.push_back(std::move(a));
        prev = &pass.acts.back();
    }

    const Mat& wo = net.out_weights;
    Vec n(wo.cols, 0.0);
    for (std::size_t j = 0; j < wo.rows; ++j) {
        for (std::size_t c = 0; c < wo.cols; ++c) n[c] += wo(j, c) * (*prev)[j];
    }
    for (std::size_t c = 0; c < wo.cols; ++c) n[c] += net.out_bias[c];
    pass.output_net = n;

    switch (net.scaling) {
        case FixedScaling::identity:
            pass.output = n;
            break;
        case FixedScaling::sigmoid:
            pass.output.resize(n.size());
            for (std::size_t c = 0; c < n.size(); ++c) {
                pass.output[c] = 1.0 / (1.0 + std::exp(-n[c]));
            }
            break;
        case FixedScaling::softmax: {
            const double zmax = *std::max_element(n.begin(), n.end());
            pass.output.resize(n.size());
            double sum = 0.0;
            for (std::size_t c = 0; c < n.size(); ++c) {
                pass.output[c] = std::exp(n[c] - zmax);
                sum += pass.output[c];
            }
            for (double& e : pass.output) e /= sum;
            break;
        }
    }
    return pass;
}

}  // namespace

Vec fixed_forward(const FixedNet& net, const Vec& x) { return run_forward(net, x).output; }

double fixed_loss_value(FixedLoss kind, const Vec& output, const Vec& target) {
    if (output.size() != target.size()) {
        throw std::invalid_argument("fixed loss: length mismatch");
    }
    if (kind == FixedLoss::mse) {
        double acc = 0.0;
        for (std::size_t l = 0; l < output.size(); ++l) {
            const double d = output[l] - target[l];
            acc += 0.5 * d * d;
        }
        return acc;
    }
    double acc = 0.0;
    for (std::size_t l = 0; l < output.size(); ++l) {
        acc -= target[l] * std::log(std::max(output[l], 1e-12));
    }
    return acc;
}

FixedGradients fixed_backward(const FixedNet& net, const Vec& x, const Vec& target,
                              FixedLoss kind) {
    const Pass pass = run_forward(net, x);
    const std::size_t depth = net.weights.size();

    // seed dE/dnet^(O) for the supported pairings
    Vec g(pass.output.size());
    if (kind == FixedLoss::mse) {
        switch (net.scaling) {
            case FixedScaling::identity:
                for (std::size_t l = 0; l < g.size(); ++l) g[l] = pass.output[l] - target[l];
                break;
            case FixedScaling::sigmoid:
                for (std::size_t l = 0; l < g.size(); ++l) {
                    g[l] = (pass.output[l] - target[l]) * pass.output[l] *
                           (1.0 - pass.output[l]);
                }
                break;
            case FixedScaling::softmax: {
                double dot = 0.0;
                for (std::size_t k = 0; k < g.size(); ++k) {
                    dot += (pass.output[k] - target[k]) * pass.output[k];
                }
                for (std::size_t l = 0; l < g.size(); ++l) {
                    g[l] = pass.output[l] * (pass.output[l] - target[l] - dot);
                }
                break;
            }
        }
    } else {
        if (net.scaling != FixedScaling::softmax) {
            throw std::invalid_argument("fixed loss: cross_entropy needs softmax");
        }
        for (std::size_t l = 0; l < g.size(); ++l) g[l] = pass.output[l] - target[l];
    }

    FixedGradients grads;
    grads.d_weights.resize(depth);
    grads.d_bias.resize(depth);

    const Vec& last = pass.acts[depth - 1];
    grads.d_out_weights = Mat(net.out_weights.rows, net.out_weights.cols);
    for (std::size_t j = 0; j < net.out_weights.rows; ++j) {
        for (std::size_t l = 0; l < net.out_weights.cols; ++l) {
            grads.d_out_weights(j, l) = last[j] * g[l];
        }
    }
    grads.d_out_bias = g;

    Vec u(net.out_weights.rows, 0.0);
    for (std::size_t j = 0; j < net.out_weights.rows; ++j) {
        for (std::size_t l = 0; l < net.out_weights.cols; ++l) {
            u[j] += net.out_weights(j, l) * g[l];
        }
    }

    for (std::size_t li = depth; li-- > 0;) {
        Vec delta(u.size());
        for (std::size_t j = 0; j < u.size(); ++j) {
            delta[j] = act_deriv(net.activations[li], pass.nets[li][j]) * u[j];
        }
        const Vec& below = li == 0 ? x : pass.acts[li - 1];
        grads.d_weights[li] = Mat(net.weights[li].rows, net.weights[li].cols);
        for (std::size_t p = 0; p < net.weights[li].rows; ++p) {
            for (std::size_t j = 0; j < net.weights[li].cols; ++j) {
                grads.d_weights[li](p, j) = below[p] * delta[j];
            }
        }
        grads.d_bias[li] = delta;
        if (li > 0) {
            Vec next_u(net.weights[li].rows, 0.0);
            for (std::size_t p = 0; p < net.weights[li].rows; ++p) {
                for (std::size_t j = 0; j < net.weights[li].cols; ++j) {
                    next_u[p] += net.weights[li](p, j) * delta[j];
                }
            }
            u = std::move(next_u);
        }
    }
    return grads;
}

}  // namespace vnn::baseline
