#pragma once

#include <cstddef>
#include <string>

#include "vnn/linalg.hpp"

namespace vnn {

enum class BasisKind { fourier, polynomial, classic };

// Ordered finite family of scalar basis functions f_1..f_M. The index map
// is part of the checkpoint format and must never change:
//
//   fourier:    f_1 = 1, f_2k = sin(k w x), f_{2k+1} = cos(k w x), k >= 1
//   polynomial: f_i = x^(i-1)
//   classic:    [x, tanh x, logistic x, max(0, x)], so M <= 4
struct BasisFamily {
    BasisKind kind = BasisKind::fourier;
    std::size_t size = 1;  // the cut-off M
    double omega = 1.0;    // fourier frequency, radians per unit input
};

// Validates M >= 1, omega > 0 for fourier, M <= 4 for classic.
BasisFamily make_family(BasisKind kind, std::size_t m, double omega = 1.0);

const char* basis_kind_name(BasisKind kind);
BasisKind basis_kind_from_name(const std::string& name);

// f_i(x), index 1-based in 1..M.
double eval_basis(const BasisFamily& family, std::size_t i, double x);

// d f_i / dx, analytic. The rectifier derivative at exactly 0 is 0.
double eval_basis_deriv(const BasisFamily& family, std::size_t i, double x);

// M x m matrix with entry (i, j) = f_i(nets[j]), indices 0-based in the
// returned matrix.
Mat basis_matrix(const BasisFamily& family, const Vec& nets);

}  // namespace vnn
