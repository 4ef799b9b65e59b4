#include "vnn/loss.hpp"

#include <cmath>
#include <stdexcept>

namespace vnn {

namespace {

constexpr double kLogClamp = 1e-12;

void check_lengths(const Vec& output, const Vec& target) {
    if (output.size() != target.size()) {
        throw std::invalid_argument("loss: output length " + std::to_string(output.size()) +
                                    " does not match target length " +
                                    std::to_string(target.size()));
    }
}

void check_probability_target(const Vec& target) {
    double sum = 0.0;
    for (double t : target) {
        if (t < 0.0) throw std::invalid_argument("cross_entropy: negative target entry");
        sum += t;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("cross_entropy: target entries must sum to 1");
    }
}

}  // namespace

const char* loss_kind_name(LossKind k) {
    return k == LossKind::mse ? "mse" : "cross_entropy";
}

LossKind loss_kind_from_name(const std::string& name) {
    if (name == "mse") return LossKind::mse;
    if (name == "cross_entropy") return LossKind::cross_entropy;
    throw std::invalid_argument("unknown loss '" + name + "'");
}

double loss_value(LossKind kind, const Vec& output, const Vec& target) {
    check_lengths(output, target);
    if (kind == LossKind::mse) {
        double acc = 0.0;
        for (std::size_t l = 0; l < output.size(); ++l) {
            const double d = output[l] - target[l];
            acc += 0.5 * d * d;
        }
        return acc;
    }
    check_probability_target(target);
    double acc = 0.0;
    for (std::size_t l = 0; l < output.size(); ++l) {
        acc -= target[l] * std::log(std::max(output[l], kLogClamp));
    }
    return acc;
}

Vec loss_grad_wrt_output(LossKind kind, const Vec& output, const Vec& target) {
    check_lengths(output, target);
    Vec g(output.size());
    if (kind == LossKind::mse) {
        for (std::size_t l = 0; l < output.size(); ++l) g[l] = output[l] - target[l];
        return g;
    }
    check_probability_target(target);
    for (std::size_t l = 0; l < output.size(); ++l) {
        // clamped entries are flat in the output
        g[l] = output[l] > kLogClamp ? -target[l] / output[l] : 0.0;
    }
    return g;
}

Vec loss_output_grad(LossKind kind, const ForwardTrace& trace, const Vec& target) {
    const Vec g_out = loss_grad_wrt_output(kind, trace.output, target);
    Vec g = scaling_jvp(trace.scaling, trace.output, g_out);
    if (!trace.output_act_deriv.empty()) {
        for (std::size_t l = 0; l < g.size(); ++l) g[l] *= trace.output_act_deriv[l];
    }
    return g;
}

}  // namespace vnn
