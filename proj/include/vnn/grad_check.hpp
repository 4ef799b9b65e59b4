#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vnn/backprop.hpp"

namespace vnn {

enum class ParamSite { weight, bias, alpha, alpha_out };

const char* param_site_name(ParamSite site);

// Addresses one scalar parameter. layer is the 0-based hidden layer; for
// weight and bias sites, layer == depth() addresses the output layer.
// Vectors are 1 x n, so bias coordinates have row 0.
struct ParamCoordinate {
    ParamSite site = ParamSite::weight;
    std::size_t layer = 0;
    std::size_t row = 0;
    std::size_t col = 0;
};

struct CheckFailure {
    ParamCoordinate coord;
    double analytic = 0.0;
    double numeric = 0.0;
};

struct CheckReport {
    std::size_t n_checked = 0;
    double max_rel_err = 0.0;
    double max_abs_err = 0.0;
    ParamCoordinate worst;
    std::vector<CheckFailure> failures;

    bool ok() const { return failures.empty(); }
};

// All coordinates of all trainable tensors, in a fixed order: per hidden
// layer weights (row-major), bias, coefficients (row-major); then output
// weights, output bias, output coefficients.
std::vector<ParamCoordinate> enumerate_coordinates(const Network& net);

double& param_ref(Network& net, const ParamCoordinate& coord);

double grad_at(const GradientSet& grads, const ParamCoordinate& coord);

// Central difference (E(p+h) - E(p-h)) / 2h over a private clone of the
// network; the caller's network is never touched.
double numeric_partial(const Network& net, const Vec& x, const Vec& target, LossKind kind,
                       const ParamCoordinate& coord, double h);

struct CheckSettings {
    double h = 1e-5;
    double rel_tol = 1e-6;
    double abs_tol = 1e-8;
    std::uint64_t seed = 0;          // drives the subset draw below
    std::size_t max_coords = 10000;  // above this, a seeded random subset is checked
};

// Compares batch_backward against numeric partials of the batch-mean loss.
// A coordinate fails when |a - n| > abs_tol and |a - n| / max(|a|, |n|)
// > rel_tol. The parallel version checks coordinates across threads, each
// perturbation on a private clone, and assembles the report in coordinate
// order; it matches the serial version bit for bit.
CheckReport check_gradients(const Network& net, const std::vector<Sample>& samples,
                            LossKind kind, const CheckSettings& settings = {});
CheckReport check_gradients_serial(const Network& net, const std::vector<Sample>& samples,
                                   LossKind kind, const CheckSettings& settings = {});

// Variant taking precomputed analytic gradients in place of batch_backward.
CheckReport check_gradients_against(const Network& net, const std::vector<Sample>& samples,
                                    LossKind kind, const GradientSet& analytic,
                                    const CheckSettings& settings = {});

// Shifts hidden (and variational output) biases until no pre-activation on
// the given samples sits within `margin` of the rectifier kink. No-op for
// families without the rectifier member. The analytic convention at the
// kink cannot match a straddling difference quotient, so checks run on the
// nudged network.
void nudge_away_from_kinks(Network& net, const std::vector<Sample>& samples,
                           double margin = 1e-4);

std::string format_coordinate(const ParamCoordinate& coord);
std::string format_report(const CheckReport& report);

// One CSV row per failure: site,layer,row,col,analytic,numeric,abs_err,rel_err.
std::string report_failure_table(const CheckReport& report);

}  // namespace vnn
