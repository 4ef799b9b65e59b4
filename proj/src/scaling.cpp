#include "vnn/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vnn {

const char* scaling_name(Scaling s) {
    switch (s) {
        case Scaling::identity: return "identity";
        case Scaling::sigmoid: return "sigmoid";
        case Scaling::softmax: return "softmax";
    }
    return "?";
}

Scaling scaling_from_name(const std::string& name) {
    if (name == "identity") return Scaling::identity;
    if (name == "sigmoid") return Scaling::sigmoid;
    if (name == "softmax") return Scaling::softmax;
    throw std::invalid_argument("unknown scaling '" + name + "'");
}

Vec apply_scaling(Scaling s, const Vec& z) {
    switch (s) {
        case Scaling::identity:
            return z;
        case Scaling::sigmoid: {
            Vec y(z.size());
            for (std::size_t i = 0; i < z.size(); ++i) y[i] = 1.0 / (1.0 + std::exp(-z[i]));
            return y;
        }
        case Scaling::softmax: {
            const double zmax = *std::max_element(z.begin(), z.end());
            Vec y(z.size());
            double sum = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) {
                y[i] = std::exp(z[i] - zmax);
                sum += y[i];
            }
            for (double& e : y) e /= sum;
            return y;
        }
    }
    return z;
}

Vec scaling_jvp(Scaling s, const Vec& scaled, const Vec& g) {
    if (scaled.size() != g.size()) {
        throw std::invalid_argument("scaling_jvp: length mismatch");
    }
    switch (s) {
        case Scaling::identity:
            return g;
        case Scaling::sigmoid: {
            Vec out(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                out[i] = g[i] * scaled[i] * (1.0 - scaled[i]);
            }
            return out;
        }
        case Scaling::softmax: {
            // dE/dz_l = y_l (g_l - sum_k g_k y_k)
            double dot = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k) dot += g[k] * scaled[k];
            Vec out(g.size());
            for (std::size_t l = 0; l < g.size(); ++l) out[l] = scaled[l] * (g[l] - dot);
            return out;
        }
    }
    return g;
}

}  // namespace vnn
