#pragma once

// Conventional fixed-activation MLP with its own forward and backward
// passes. Shares only the Mat/Vec containers with the rest of the library;
// none of the gradient code, scaling code or loss code is reused, so the
// equivalence tests against the variational network check two independent
// implementations.

#include <vector>

#include "vnn/linalg.hpp"

namespace vnn::baseline {

enum class FixedActivation { tanh_fn, sigmoid_fn, relu_fn };
enum class FixedScaling { identity, sigmoid, softmax };
enum class FixedLoss { mse, cross_entropy };

struct FixedNet {
    std::vector<Mat> weights;  // in x out per hidden layer
    std::vector<Vec> biases;
    std::vector<FixedActivation> activations;  // per hidden layer
    Mat out_weights;
    Vec out_bias;
    FixedScaling scaling = FixedScaling::identity;
};

struct FixedGradients {
    std::vector<Mat> d_weights;
    std::vector<Vec> d_bias;
    Mat d_out_weights;
    Vec d_out_bias;
};

Vec fixed_forward(const FixedNet& net, const Vec& x);

double fixed_loss_value(FixedLoss kind, const Vec& output, const Vec& target);

FixedGradients fixed_backward(const FixedNet& net, const Vec& x, const Vec& target,
                              FixedLoss kind);

}  // namespace vnn::baseline
