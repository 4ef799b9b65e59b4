#pragma once

#include <string>

#include "vnn/linalg.hpp"

namespace vnn {

enum class Scaling { identity, sigmoid, softmax };

const char* scaling_name(Scaling s);
Scaling scaling_from_name(const std::string& name);

Vec apply_scaling(Scaling s, const Vec& z);

// Jacobian-vector product: given y = scaling(z) and g = dE/dy, returns
// dE/dz. Softmax couples its components, so this is the full product,
// not a diagonal.
Vec scaling_jvp(Scaling s, const Vec& scaled, const Vec& g);

}  // namespace vnn
