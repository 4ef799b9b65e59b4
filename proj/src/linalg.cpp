#include "vnn/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace vnn {

Vec matvec(const Mat& a, const Vec& x) {
    if (x.size() != a.cols) {
        throw std::invalid_argument("matvec: vector length " + std::to_string(x.size()) +
                                    " does not match " + std::to_string(a.rows) + "x" +
                                    std::to_string(a.cols) + " matrix");
    }
    Vec y(a.rows, 0.0);
    for (std::size_t r = 0; r < a.rows; ++r) {
        double acc = 0.0;
        const double* row = a.data.data() + r * a.cols;
        for (std::size_t c = 0; c < a.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

Vec matvec_t(const Mat& a, const Vec& x) {
    if (x.size() != a.rows) {
        throw std::invalid_argument("matvec_t: vector length " + std::to_string(x.size()) +
                                    " does not match " + std::to_string(a.rows) + "x" +
                                    std::to_string(a.cols) + " matrix");
    }
    Vec y(a.cols, 0.0);
    for (std::size_t r = 0; r < a.rows; ++r) {
        const double* row = a.data.data() + r * a.cols;
        const double xr = x[r];
        for (std::size_t c = 0; c < a.cols; ++c) y[c] += row[c] * xr;
    }
    return y;
}

bool all_finite(const Vec& v) {
    for (double e : v) {
        if (!std::isfinite(e)) return false;
    }
    return true;
}

bool all_finite(const Mat& m) { return all_finite(m.data); }

}  // namespace vnn
