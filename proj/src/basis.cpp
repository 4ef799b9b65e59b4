#include "vnn/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace vnn {

namespace {

void validate(const BasisFamily& family) {
    if (family.size < 1) throw std::invalid_argument("basis family: M must be >= 1");
    if (family.kind == BasisKind::fourier && !(family.omega > 0.0)) {
        throw std::invalid_argument("basis family: omega must be > 0 for fourier");
    }
    if (family.kind == BasisKind::classic && family.size > 4) {
        throw std::invalid_argument("basis family: classic supports at most M = 4");
    }
}

void check_index(const BasisFamily& family, std::size_t i) {
    if (i < 1 || i > family.size) {
        throw std::out_of_range("basis index " + std::to_string(i) + " out of range 1.." +
                                std::to_string(family.size));
    }
}

// x^n by plain repeated multiplication; one fixed evaluation path keeps
// results bit-identical across calls.
double ipow(double x, std::size_t n) {
    double r = 1.0;
    for (std::size_t k = 0; k < n; ++k) r *= x;
    return r;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

BasisFamily make_family(BasisKind kind, std::size_t m, double omega) {
    BasisFamily family{kind, m, omega};
    validate(family);
    return family;
}

const char* basis_kind_name(BasisKind kind) {
    switch (kind) {
        case BasisKind::fourier: return "fourier";
        case BasisKind::polynomial: return "polynomial";
        case BasisKind::classic: return "classic";
    }
    return "?";
}

BasisKind basis_kind_from_name(const std::string& name) {
    if (name == "fourier") return BasisKind::fourier;
    if (name == "polynomial") return BasisKind::polynomial;
    if (name == "classic") return BasisKind::classic;
    throw std::invalid_argument("unknown basis kind '" + name + "'");
}

double eval_basis(const BasisFamily& family, std::size_t i, double x) {
    validate(family);
    check_index(family, i);
    switch (family.kind) {
        case BasisKind::fourier: {
            if (i == 1) return 1.0;
            const double k = static_cast<double>(i / 2);
            const double arg = k * family.omega * x;
            return (i % 2 == 0) ? std::sin(arg) : std::cos(arg);
        }
        case BasisKind::polynomial:
            return ipow(x, i - 1);
        case BasisKind::classic:
            switch (i) {
                case 1: return x;
                case 2: return std::tanh(x);
                case 3: return logistic(x);
                default: return x > 0.0 ? x : 0.0;
            }
    }
    return 0.0;
}

double eval_basis_deriv(const BasisFamily& family, std::size_t i, double x) {
    validate(family);
    check_index(family, i);
    switch (family.kind) {
        case BasisKind::fourier: {
            if (i == 1) return 0.0;
            const double k = static_cast<double>(i / 2);
            const double arg = k * family.omega * x;
            const double scale = k * family.omega;
            return (i % 2 == 0) ? scale * std::cos(arg) : -scale * std::sin(arg);
        }
        case BasisKind::polynomial:
            if (i == 1) return 0.0;
            return static_cast<double>(i - 1) * ipow(x, i - 2);
        case BasisKind::classic:
            switch (i) {
                case 1: return 1.0;
                case 2: {
                    const double t = std::tanh(x);
                    return 1.0 - t * t;
                }
                case 3: {
                    const double s = logistic(x);
                    return s * (1.0 - s);
                }
                default:
                    // subgradient convention: 0 at the kink
                    return x > 0.0 ? 1.0 : 0.0;
            }
    }
    return 0.0;
}

Mat basis_matrix(const BasisFamily& family, const Vec& nets) {
    Mat f(family.size, nets.size());
    for (std::size_t i = 0; i < family.size; ++i) {
        for (std::size_t j = 0; j < nets.size(); ++j) {
            f(i, j) = eval_basis(family, i + 1, nets[j]);
        }
    }
    return f;
}

}  // namespace vnn
