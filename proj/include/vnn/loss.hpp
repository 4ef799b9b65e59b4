#pragma once

#include <string>

#include "vnn/network.hpp"

namespace vnn {

enum class LossKind { mse, cross_entropy };

const char* loss_kind_name(LossKind k);
LossKind loss_kind_from_name(const std::string& name);

// mse: sum_l (out_l - t_l)^2 / 2.
// cross_entropy: -sum_l t_l ln(max(out_l, 1e-12)); the target must be a
// probability vector.
double loss_value(LossKind kind, const Vec& output, const Vec& target);

// dE / d output. Differentiates the clamped cross-entropy, so entries at or
// below the clamp contribute zero.
Vec loss_grad_wrt_output(LossKind kind, const Vec& output, const Vec& target);

// g^(O) = dE / d net^(O): the full Jacobian-vector product through the
// output scaling and, when the trace carries one, the variational output
// activation. For softmax + cross_entropy this equals output - target.
Vec loss_output_grad(LossKind kind, const ForwardTrace& trace, const Vec& target);

}  // namespace vnn
