#include "vnn/backprop.hpp"

#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vnn {

namespace {

// Gradient of the loss with respect to the pre-scale output z, i.e. the
// chain up to but not including F^(O)'. Needed separately because the
// output coefficient gradient attaches at z, not at net^(O).
Vec prescale_grad(LossKind kind, const ForwardTrace& trace, const Vec& target) {
    const Vec g_out = loss_grad_wrt_output(kind, trace.output, target);
    return scaling_jvp(trace.scaling, trace.output, g_out);
}

void check_trace(const Network& net, const ForwardTrace& trace) {
    if (trace.nets.size() != net.depth() || trace.acts.size() != net.depth()) {
        throw std::invalid_argument("backward: trace does not match network depth");
    }
    if (trace.output_net.size() != net.output_width()) {
        throw std::invalid_argument("backward: trace output width does not match network");
    }
    if (net.out_act.has_value() != !trace.output_act_deriv.empty()) {
        throw std::invalid_argument("backward: trace output activation does not match network");
    }
}

// Coefficient gradient of one hidden layer given u = dE/da^(L):
// neuron mode [i][j] = f_i(net_j) u_j, layer mode [i] = sum_j f_i(net_j) u_j.
Mat alpha_grad_from_u(const VariationalActivation& act, const Vec& nets, const Vec& u) {
    const std::size_t m = act.family.size;
    if (act.mode == ActMode::neuron) {
        Mat g(m, act.width);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < act.width; ++j) {
                g(i, j) = eval_basis(act.family, i + 1, nets[j]) * u[j];
            }
        }
        return g;
    }
    Mat g(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < act.width; ++j) {
            acc += eval_basis(act.family, i + 1, nets[j]) * u[j];
        }
        g(i, 0) = acc;
    }
    return g;
}

// Modified weight matrix: row j scaled by the activation derivative of the
// source layer, entry (j, l) = w_jl F'(net_j^(source)).
Mat build_tilde(const Mat& weights, const Vec& source_deriv) {
    Mat t(weights.rows, weights.cols);
    for (std::size_t r = 0; r < weights.rows; ++r) {
        for (std::size_t c = 0; c < weights.cols; ++c) {
            t(r, c) = weights(r, c) * source_deriv[r];
        }
    }
    return t;
}

}  // namespace

GradientSet zeros_like(const Network& net) {
    GradientSet g;
    g.d_weights.reserve(net.depth());
    g.d_bias.reserve(net.depth());
    g.d_alpha.reserve(net.depth());
    for (const Layer& layer : net.hidden) {
        g.d_weights.emplace_back(layer.weights.rows, layer.weights.cols);
        g.d_bias.emplace_back(layer.bias.size(), 0.0);
        g.d_alpha.emplace_back(layer.act.coeffs.rows, layer.act.coeffs.cols);
    }
    g.d_out_weights = Mat(net.out_weights.rows, net.out_weights.cols);
    g.d_out_bias = Vec(net.out_bias.size(), 0.0);
    if (net.out_act) {
        g.d_alpha_out = Mat(net.out_act->coeffs.rows, net.out_act->coeffs.cols);
    }
    return g;
}

void add_scaled(GradientSet& acc, const GradientSet& g, double s) {
    if (acc.d_weights.size() != g.d_weights.size() ||
        acc.d_alpha_out.has_value() != g.d_alpha_out.has_value()) {
        throw std::invalid_argument("gradient accumulate: shape mismatch");
    }
    for (std::size_t l = 0; l < acc.d_weights.size(); ++l) {
        for (std::size_t k = 0; k < acc.d_weights[l].data.size(); ++k) {
            acc.d_weights[l].data[k] += s * g.d_weights[l].data[k];
        }
        for (std::size_t k = 0; k < acc.d_bias[l].size(); ++k) {
            acc.d_bias[l][k] += s * g.d_bias[l][k];
        }
        for (std::size_t k = 0; k < acc.d_alpha[l].data.size(); ++k) {
            acc.d_alpha[l].data[k] += s * g.d_alpha[l].data[k];
        }
    }
    for (std::size_t k = 0; k < acc.d_out_weights.data.size(); ++k) {
        acc.d_out_weights.data[k] += s * g.d_out_weights.data[k];
    }
    for (std::size_t k = 0; k < acc.d_out_bias.size(); ++k) {
        acc.d_out_bias[k] += s * g.d_out_bias[k];
    }
    if (acc.d_alpha_out) {
        for (std::size_t k = 0; k < acc.d_alpha_out->data.size(); ++k) {
            acc.d_alpha_out->data[k] += s * g.d_alpha_out->data[k];
        }
    }
}

GradientSet backward(const Network& net, const ForwardTrace& trace, const Vec& target,
                     LossKind kind) {
    check_trace(net, trace);
    GradientSet grads = zeros_like(net);

    // dE/dnet^(O); the prescale gradient feeds the output coefficients.
    Vec g;
    if (net.out_act) {
        const Vec gz = prescale_grad(kind, trace, target);
        grads.d_alpha_out = alpha_grad_from_u(*net.out_act, trace.output_net, gz);
        g = gz;
        for (std::size_t l = 0; l < g.size(); ++l) g[l] *= trace.output_act_deriv[l];
    } else {
        g = loss_output_grad(kind, trace, target);
    }

    const std::size_t depth = net.depth();
    const Vec& last_act = trace.acts[depth - 1];
    for (std::size_t j = 0; j < net.out_weights.rows; ++j) {
        for (std::size_t l = 0; l < net.out_weights.cols; ++l) {
            grads.d_out_weights(j, l) = last_act[j] * g[l];
        }
    }
    grads.d_out_bias = g;

    // u^(L) = dE/da^(L), delta^(L) = dE/dnet^(L) = F'^(L) (.) u^(L)
    Vec u = matvec(net.out_weights, g);
    for (std::size_t li = depth; li-- > 0;) {
        const Layer& layer = net.hidden[li];
        if (layer.trainable_alpha) {
            grads.d_alpha[li] = alpha_grad_from_u(layer.act, trace.nets[li], u);
        }

        const Vec fprime = activate_deriv(layer.act, trace.nets[li]);
        Vec delta(u.size());
        for (std::size_t j = 0; j < u.size(); ++j) delta[j] = fprime[j] * u[j];

        const Vec& below = li == 0 ? trace.input : trace.acts[li - 1];
        for (std::size_t p = 0; p < layer.weights.rows; ++p) {
            for (std::size_t j = 0; j < layer.weights.cols; ++j) {
                grads.d_weights[li](p, j) = below[p] * delta[j];
            }
        }
        grads.d_bias[li] = delta;

        if (!all_finite(delta) || !all_finite(grads.d_alpha[li])) {
            throw std::runtime_error("backward: non-finite gradient at hidden layer " +
                                     std::to_string(li + 1));
        }
        if (li > 0) u = matvec(layer.weights, delta);
    }
    return grads;
}

Vec alpha_grad_layer_closed_form(const Network& net, const ForwardTrace& trace,
                                 const Vec& target, LossKind kind, std::size_t layer_index) {
    check_trace(net, trace);
    const std::size_t depth = net.depth();
    if (layer_index >= depth) throw std::out_of_range("closed form: layer index out of range");
    const Layer& layer = net.hidden[layer_index];
    if (layer.act.mode != ActMode::layer) {
        throw std::invalid_argument("closed form: layer " + std::to_string(layer_index + 1) +
                                    " is not in layer mode");
    }

    // Chain of connections above the differentiated layer, leftmost plain,
    // the rest carrying the source layer's F'. Applied right to left.
    Vec v = loss_output_grad(kind, trace, target);
    for (std::size_t t = depth; t > layer_index + 1; --t) {
        // connection t: hidden t-1 -> (t == depth ? output : hidden t)
        const Mat& w = t == depth ? net.out_weights : net.hidden[t].weights;
        const Vec source_deriv =
            activate_deriv(net.hidden[t - 1].act, trace.nets[t - 1]);
        v = matvec(build_tilde(w, source_deriv), v);
    }
    const Mat& plain = layer_index + 1 == depth ? net.out_weights
                                                : net.hidden[layer_index + 1].weights;
    v = matvec(plain, v);

    const Mat f = basis_matrix(layer.act.family, trace.nets[layer_index]);
    return matvec(f, v);
}

Mat alpha_grad_neuron_closed_form(const Network& net, const ForwardTrace& trace,
                                  const Vec& target, LossKind kind, std::size_t layer_index) {
    check_trace(net, trace);
    const std::size_t depth = net.depth();
    if (layer_index >= depth) throw std::out_of_range("closed form: layer index out of range");
    const Layer& layer = net.hidden[layer_index];
    if (layer.act.mode != ActMode::neuron) {
        throw std::invalid_argument("closed form: layer " + std::to_string(layer_index + 1) +
                                    " is not in neuron mode");
    }

    // Innermost W^(O) g, then alternating column-wise F' products and plain
    // weight multiplications down to the differentiated layer.
    Vec v = matvec(net.out_weights, loss_output_grad(kind, trace, target));
    for (std::size_t t = depth - 1; t > layer_index; --t) {
        const Vec fprime = activate_deriv(net.hidden[t].act, trace.nets[t]);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] *= fprime[j];
        v = matvec(net.hidden[t].weights, v);
    }

    const Mat f = basis_matrix(layer.act.family, trace.nets[layer_index]);
    Mat result(f.rows, f.cols);
    for (std::size_t i = 0; i < f.rows; ++i) {
        for (std::size_t j = 0; j < f.cols; ++j) result(i, j) = f(i, j) * v[j];
    }
    return result;
}

namespace {

GradientSet reduce_mean(const Network& net, std::vector<GradientSet>& parts) {
    GradientSet acc = zeros_like(net);
    for (const GradientSet& g : parts) add_scaled(acc, g, 1.0);
    const double inv = 1.0 / static_cast<double>(parts.size());
    for (std::size_t l = 0; l < acc.d_weights.size(); ++l) {
        for (double& e : acc.d_weights[l].data) e *= inv;
        for (double& e : acc.d_bias[l]) e *= inv;
        for (double& e : acc.d_alpha[l].data) e *= inv;
    }
    for (double& e : acc.d_out_weights.data) e *= inv;
    for (double& e : acc.d_out_bias) e *= inv;
    if (acc.d_alpha_out) {
        for (double& e : acc.d_alpha_out->data) e *= inv;
    }
    return acc;
}

GradientSet sample_grad(const Network& net, const Sample& sample, LossKind kind) {
    const ForwardTrace trace = forward(net, sample.first);
    return backward(net, trace, sample.second, kind);
}

}  // namespace

GradientSet batch_backward_serial(const Network& net, const std::vector<Sample>& samples,
                                  LossKind kind) {
    if (samples.empty()) throw std::invalid_argument("batch_backward: empty batch");
    std::vector<GradientSet> parts(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
        parts[s] = sample_grad(net, samples[s], kind);
    }
    return reduce_mean(net, parts);
}

GradientSet batch_backward(const Network& net, const std::vector<Sample>& samples,
                           LossKind kind) {
    if (samples.empty()) throw std::invalid_argument("batch_backward: empty batch");
    std::vector<GradientSet> parts(samples.size());
    std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (samples.size() > 1)
#endif
    for (std::size_t s = 0; s < samples.size(); ++s) {
        try {
            parts[s] = sample_grad(net, samples[s], kind);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return reduce_mean(net, parts);
}

double dataset_mean_loss(const Network& net, const std::vector<Sample>& samples,
                         LossKind kind) {
    if (samples.empty()) throw std::invalid_argument("mean loss: empty sample set");
    double acc = 0.0;
    for (const Sample& s : samples) {
        acc += loss_value(kind, predict(net, s.first), s.second);
    }
    return acc / static_cast<double>(samples.size());
}

}  // namespace vnn
