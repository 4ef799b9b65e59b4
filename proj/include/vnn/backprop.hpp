#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "vnn/loss.hpp"

namespace vnn {

using Sample = std::pair<Vec, Vec>;  // (features, target)

// Mirrors the network's parameters shape for shape.
struct GradientSet {
    std::vector<Mat> d_weights;  // per hidden layer
    std::vector<Vec> d_bias;
    std::vector<Mat> d_alpha;    // M x 1 or M x width per hidden layer
    Mat d_out_weights;
    Vec d_out_bias;
    std::optional<Mat> d_alpha_out;  // M x 1, present iff the output activation is on
};

GradientSet zeros_like(const Network& net);

// acc += s * g
void add_scaled(GradientSet& acc, const GradientSet& g, double s);

// Single-sample gradients via one backward sweep. Hidden layers with
// trainable_alpha == false still propagate their F' but report zero
// coefficient gradients.
GradientSet backward(const Network& net, const ForwardTrace& trace, const Vec& target,
                     LossKind kind);

// Literal matrix pipelines for the coefficient gradients, kept as
// independent cross-checks of backward. Both build the modified weight
// matrices explicitly and multiply right to left, and both return the raw
// gradient regardless of the layer's trainable flag. layer_index is the
// 0-based hidden layer.
Vec alpha_grad_layer_closed_form(const Network& net, const ForwardTrace& trace,
                                 const Vec& target, LossKind kind, std::size_t layer_index);
Mat alpha_grad_neuron_closed_form(const Network& net, const ForwardTrace& trace,
                                  const Vec& target, LossKind kind, std::size_t layer_index);

// Arithmetic mean of per-sample gradients. The parallel version evaluates
// samples across threads but reduces in ascending sample order with the
// same arithmetic as the serial one, so the two agree bit for bit.
GradientSet batch_backward(const Network& net, const std::vector<Sample>& samples,
                           LossKind kind);
GradientSet batch_backward_serial(const Network& net, const std::vector<Sample>& samples,
                                  LossKind kind);

// Mean loss over a sample set, accumulated in index order.
double dataset_mean_loss(const Network& net, const std::vector<Sample>& samples,
                         LossKind kind);

}  // namespace vnn
