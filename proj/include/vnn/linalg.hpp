#pragma once

#include <cstddef>
#include <vector>

namespace vnn {

using Vec = std::vector<double>;

// Dense row-major matrix. Weight matrices use the source x destination
// orientation throughout: entry (j, l) is the weight on the connection
// from source neuron j to destination neuron l.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

// y = A x
Vec matvec(const Mat& a, const Vec& x);

// y = A^T x
Vec matvec_t(const Mat& a, const Vec& x);

bool all_finite(const Vec& v);
bool all_finite(const Mat& m);

}  // namespace vnn
