#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vnn/backprop.hpp"

namespace vnn {

struct TrainConfig {
    double lr_weights = 0.1;
    double lr_alpha = 0.1;  // 0 freezes the activation shape without freezing W, b
    std::size_t epochs = 100;
    std::size_t batch_size = 1;
    std::uint64_t seed = 0;
    bool shuffle = true;
    std::size_t log_every = 1;  // epochs between history entries
};

struct LogEntry {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    std::optional<double> val_loss;
};

struct TrainHistory {
    std::vector<LogEntry> entries;
    double wall_seconds = 0.0;

    double final_train_loss() const { return entries.back().train_loss; }
};

// W <- W - lr_w dW, b <- b - lr_w db, alpha <- alpha - lr_a dAlpha.
// Frozen layers keep their coefficients.
void sgd_step(Network& net, const GradientSet& grads, double lr_w, double lr_a);

// Epoch loop: seeded shuffle, batches in order (last one may be short),
// batch_backward + sgd_step per batch. The logged loss is the full
// training-set mean under the parameters at that point; the final epoch is
// always logged. Bit-deterministic for a fixed config, seed and data.
TrainHistory train(Network& net, const std::vector<Sample>& train_set,
                   const std::vector<Sample>* val_set, LossKind kind,
                   const TrainConfig& cfg);

}  // namespace vnn
