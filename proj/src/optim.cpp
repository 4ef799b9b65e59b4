#include "vnn/optim.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "vnn/rng.hpp"

namespace vnn {

namespace {

void apply_update(Mat& param, const Mat& grad, double lr, const char* what) {
    if (!param.same_shape(grad)) {
        throw std::invalid_argument(std::string("sgd_step: ") + what + " shape mismatch");
    }
    for (std::size_t k = 0; k < param.data.size(); ++k) param.data[k] -= lr * grad.data[k];
    if (!all_finite(param)) {
        throw std::runtime_error(std::string("sgd_step: non-finite ") + what + " update");
    }
}

void apply_update(Vec& param, const Vec& grad, double lr, const char* what) {
    if (param.size() != grad.size()) {
        throw std::invalid_argument(std::string("sgd_step: ") + what + " shape mismatch");
    }
    for (std::size_t k = 0; k < param.size(); ++k) param[k] -= lr * grad[k];
    if (!all_finite(param)) {
        throw std::runtime_error(std::string("sgd_step: non-finite ") + what + " update");
    }
}

}  // namespace

void sgd_step(Network& net, const GradientSet& grads, double lr_w, double lr_a) {
    if (grads.d_weights.size() != net.depth() ||
        grads.d_alpha_out.has_value() != net.out_act.has_value()) {
        throw std::invalid_argument("sgd_step: gradient set does not match network");
    }
    for (std::size_t l = 0; l < net.depth(); ++l) {
        Layer& layer = net.hidden[l];
        apply_update(layer.weights, grads.d_weights[l], lr_w, "weight");
        apply_update(layer.bias, grads.d_bias[l], lr_w, "bias");
        if (layer.trainable_alpha) {
            apply_update(layer.act.coeffs, grads.d_alpha[l], lr_a, "coefficient");
        }
    }
    apply_update(net.out_weights, grads.d_out_weights, lr_w, "weight");
    apply_update(net.out_bias, grads.d_out_bias, lr_w, "bias");
    if (net.out_act) {
        apply_update(net.out_act->coeffs, *grads.d_alpha_out, lr_a, "coefficient");
    }
}

TrainHistory train(Network& net, const std::vector<Sample>& train_set,
                   const std::vector<Sample>* val_set, LossKind kind, const TrainConfig& cfg) {
    if (train_set.empty()) throw std::invalid_argument("train: empty training set");
    if (cfg.batch_size == 0) throw std::invalid_argument("train: batch_size must be >= 1");
    if (cfg.log_every == 0) throw std::invalid_argument("train: log_every must be >= 1");
    if (cfg.lr_weights < 0.0 || cfg.lr_alpha < 0.0) {
        throw std::invalid_argument("train: learning rates must be >= 0");
    }
    for (const Sample& s : train_set) {
        if (s.first.size() != net.input_width() || s.second.size() != net.output_width()) {
            throw std::invalid_argument("train: sample width does not match network");
        }
    }

    const auto start = std::chrono::steady_clock::now();
    TrainHistory history;
    Rng rng(cfg.seed);
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        try {
            if (cfg.shuffle) rng.shuffle(order);
            for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
                const std::size_t end = std::min(begin + cfg.batch_size, order.size());
                std::vector<Sample> batch;
                batch.reserve(end - begin);
                for (std::size_t k = begin; k < end; ++k) batch.push_back(train_set[order[k]]);
                const GradientSet grads = batch_backward(net, batch, kind);
                sgd_step(net, grads, cfg.lr_weights, cfg.lr_alpha);
            }

            if (epoch % cfg.log_every == 0 || epoch == cfg.epochs) {
                LogEntry entry;
                entry.epoch = epoch;
                entry.train_loss = dataset_mean_loss(net, train_set, kind);
                if (!std::isfinite(entry.train_loss)) {
                    throw std::runtime_error("training diverged (non-finite loss)");
                }
                if (val_set && !val_set->empty()) {
                    entry.val_loss = dataset_mean_loss(net, *val_set, kind);
                }
                history.entries.push_back(entry);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("epoch " + std::to_string(epoch) + ": " + e.what());
        }
    }

    history.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return history;
}

}  // namespace vnn
