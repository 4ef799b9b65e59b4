#include "vnn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "vnn/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vnn {

const char* param_site_name(ParamSite site) {
    switch (site) {
        case ParamSite::weight: return "weight";
        case ParamSite::bias: return "bias";
        case ParamSite::alpha: return "alpha";
        case ParamSite::alpha_out: return "alpha_out";
    }
    return "?";
}

std::vector<ParamCoordinate> enumerate_coordinates(const Network& net) {
    std::vector<ParamCoordinate> coords;
    const std::size_t depth = net.depth();
    for (std::size_t l = 0; l < depth; ++l) {
        const Layer& layer = net.hidden[l];
        for (std::size_t r = 0; r < layer.weights.rows; ++r) {
            for (std::size_t c = 0; c < layer.weights.cols; ++c) {
                coords.push_back({ParamSite::weight, l, r, c});
            }
        }
        for (std::size_t c = 0; c < layer.bias.size(); ++c) {
            coords.push_back({ParamSite::bias, l, 0, c});
        }
        for (std::size_t r = 0; r < layer.act.coeffs.rows; ++r) {
            for (std::size_t c = 0; c < layer.act.coeffs.cols; ++c) {
                coords.push_back({ParamSite::alpha, l, r, c});
            }
        }
    }
    for (std::size_t r = 0; r < net.out_weights.rows; ++r) {
        for (std::size_t c = 0; c < net.out_weights.cols; ++c) {
            coords.push_back({ParamSite::weight, depth, r, c});
        }
    }
    for (std::size_t c = 0; c < net.out_bias.size(); ++c) {
        coords.push_back({ParamSite::bias, depth, 0, c});
    }
    if (net.out_act) {
        for (std::size_t r = 0; r < net.out_act->coeffs.rows; ++r) {
            coords.push_back({ParamSite::alpha_out, depth, r, 0});
        }
    }
    return coords;
}

double& param_ref(Network& net, const ParamCoordinate& coord) {
    const std::size_t depth = net.depth();
    switch (coord.site) {
        case ParamSite::weight: {
            Mat& w = coord.layer == depth ? net.out_weights : net.hidden.at(coord.layer).weights;
            if (coord.row >= w.rows || coord.col >= w.cols) break;
            return w(coord.row, coord.col);
        }
        case ParamSite::bias: {
            Vec& b = coord.layer == depth ? net.out_bias : net.hidden.at(coord.layer).bias;
            if (coord.row != 0 || coord.col >= b.size()) break;
            return b[coord.col];
        }
        case ParamSite::alpha: {
            if (coord.layer >= depth) break;
            Mat& a = net.hidden[coord.layer].act.coeffs;
            if (coord.row >= a.rows || coord.col >= a.cols) break;
            return a(coord.row, coord.col);
        }
        case ParamSite::alpha_out: {
            if (!net.out_act) break;
            Mat& a = net.out_act->coeffs;
            if (coord.row >= a.rows || coord.col >= a.cols) break;
            return a(coord.row, coord.col);
        }
    }
    throw std::out_of_range("invalid parameter coordinate " + format_coordinate(coord));
}

double grad_at(const GradientSet& grads, const ParamCoordinate& coord) {
    const std::size_t depth = grads.d_weights.size();
    switch (coord.site) {
        case ParamSite::weight: {
            const Mat& w = coord.layer == depth ? grads.d_out_weights
                                                : grads.d_weights.at(coord.layer);
            return w(coord.row, coord.col);
        }
        case ParamSite::bias: {
            const Vec& b = coord.layer == depth ? grads.d_out_bias : grads.d_bias.at(coord.layer);
            return b.at(coord.col);
        }
        case ParamSite::alpha:
            return grads.d_alpha.at(coord.layer)(coord.row, coord.col);
        case ParamSite::alpha_out:
            if (!grads.d_alpha_out) break;
            return (*grads.d_alpha_out)(coord.row, coord.col);
    }
    throw std::out_of_range("invalid parameter coordinate " + format_coordinate(coord));
}

double numeric_partial(const Network& net, const Vec& x, const Vec& target, LossKind kind,
                       const ParamCoordinate& coord, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("numeric_partial: h must be > 0");
    Network probe = net;
    double& p = param_ref(probe, coord);
    const double original = p;
    p = original + h;
    const double e_plus = loss_value(kind, forward(probe, x).output, target);
    p = original - h;
    const double e_minus = loss_value(kind, forward(probe, x).output, target);
    return (e_plus - e_minus) / (2.0 * h);
}

namespace {

// Batch-mean central difference: one clone, two loss sweeps per coordinate.
double numeric_partial_batch(const Network& net, const std::vector<Sample>& samples,
                             LossKind kind, const ParamCoordinate& coord, double h) {
    Network probe = net;
    double& p = param_ref(probe, coord);
    const double original = p;
    p = original + h;
    double e_plus = 0.0;
    for (const Sample& s : samples) {
        e_plus += loss_value(kind, forward(probe, s.first).output, s.second);
    }
    p = original - h;
    double e_minus = 0.0;
    for (const Sample& s : samples) {
        e_minus += loss_value(kind, forward(probe, s.first).output, s.second);
    }
    const double n = static_cast<double>(samples.size());
    return (e_plus - e_minus) / (2.0 * h * n);
}

std::vector<ParamCoordinate> select_coordinates(const Network& net,
                                                const CheckSettings& settings) {
    std::vector<ParamCoordinate> coords = enumerate_coordinates(net);
    if (coords.size() <= settings.max_coords) return coords;

    // Seeded partial Fisher-Yates, then back to ascending order so the
    // comparison sweep stays index-ordered.
    std::vector<std::size_t> index(coords.size());
    std::iota(index.begin(), index.end(), 0);
    Rng rng(settings.seed);
    for (std::size_t i = 0; i < settings.max_coords; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(index.size() - i));
        std::swap(index[i], index[j]);
    }
    index.resize(settings.max_coords);
    std::sort(index.begin(), index.end());
    std::vector<ParamCoordinate> subset;
    subset.reserve(index.size());
    for (std::size_t k : index) subset.push_back(coords[k]);
    return subset;
}

CheckReport run_check(const Network& net, const std::vector<Sample>& samples, LossKind kind,
                      const GradientSet& analytic, const CheckSettings& settings,
                      [[maybe_unused]] bool parallel) {
    if (samples.empty()) throw std::invalid_argument("check_gradients: empty sample set");
    if (!(settings.rel_tol > 0.0) || !(settings.abs_tol > 0.0)) {
        throw std::invalid_argument("check_gradients: tolerances must be > 0");
    }
    const std::vector<ParamCoordinate> coords = select_coordinates(net, settings);
    std::vector<double> numeric(coords.size());
    std::exception_ptr error;

    // Frozen coefficients are constants of the optimization; both sides of
    // their comparison are zero by definition.
    auto frozen = [&](const ParamCoordinate& c) {
        return c.site == ParamSite::alpha && !net.hidden[c.layer].trainable_alpha;
    };

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && coords.size() > 1)
#endif
    for (std::size_t k = 0; k < coords.size(); ++k) {
        try {
            numeric[k] = frozen(coords[k])
                             ? 0.0
                             : numeric_partial_batch(net, samples, kind, coords[k], settings.h);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    CheckReport report;
    report.n_checked = coords.size();
    double worst_rel = -1.0;
    for (std::size_t k = 0; k < coords.size(); ++k) {
        const double a = grad_at(analytic, coords[k]);
        const double n = numeric[k];
        const double abs_err = std::abs(a - n);
        const double scale = std::max(std::abs(a), std::abs(n));
        const double rel_err = scale > 0.0 ? abs_err / scale : 0.0;
        report.max_abs_err = std::max(report.max_abs_err, abs_err);
        if (rel_err > worst_rel) {
            worst_rel = rel_err;
            report.max_rel_err = rel_err;
            report.worst = coords[k];
        }
        if (abs_err > settings.abs_tol && rel_err > settings.rel_tol) {
            report.failures.push_back({coords[k], a, n});
        }
    }
    return report;
}

}  // namespace

CheckReport check_gradients_against(const Network& net, const std::vector<Sample>& samples,
                                    LossKind kind, const GradientSet& analytic,
                                    const CheckSettings& settings) {
    return run_check(net, samples, kind, analytic, settings, true);
}

CheckReport check_gradients(const Network& net, const std::vector<Sample>& samples,
                            LossKind kind, const CheckSettings& settings) {
    return run_check(net, samples, kind, batch_backward(net, samples, kind), settings, true);
}

CheckReport check_gradients_serial(const Network& net, const std::vector<Sample>& samples,
                                   LossKind kind, const CheckSettings& settings) {
    return run_check(net, samples, kind, batch_backward_serial(net, samples, kind), settings,
                     false);
}

void nudge_away_from_kinks(Network& net, const std::vector<Sample>& samples, double margin) {
    const BasisFamily& family = net.family();
    const bool has_kink = family.kind == BasisKind::classic && family.size >= 4;
    if (!has_kink) return;

    for (int pass = 0; pass < 32; ++pass) {
        bool moved = false;
        for (const Sample& s : samples) {
            const ForwardTrace trace = forward(net, s.first);
            for (std::size_t l = 0; l < net.depth(); ++l) {
                for (std::size_t j = 0; j < trace.nets[l].size(); ++j) {
                    if (std::abs(trace.nets[l][j]) < margin) {
                        net.hidden[l].bias[j] += 2.0 * margin;
                        moved = true;
                    }
                }
            }
            if (net.out_act) {
                for (std::size_t j = 0; j < trace.output_net.size(); ++j) {
                    if (std::abs(trace.output_net[j]) < margin) {
                        net.out_bias[j] += 2.0 * margin;
                        moved = true;
                    }
                }
            }
        }
        if (!moved) return;
    }
}

std::string format_coordinate(const ParamCoordinate& coord) {
    std::ostringstream out;
    out << param_site_name(coord.site) << " L" << coord.layer << " [" << coord.row << ","
        << coord.col << "]";
    return out.str();
}

std::string format_report(const CheckReport& report) {
    char line[160];
    std::ostringstream out;
    std::snprintf(line, sizeof line, "gradient check: %zu coordinates\n", report.n_checked);
    out << line;
    std::snprintf(line, sizeof line, "  max abs err  %.3e\n", report.max_abs_err);
    out << line;
    std::snprintf(line, sizeof line, "  max rel err  %.3e  (%s)\n", report.max_rel_err,
                  format_coordinate(report.worst).c_str());
    out << line;
    std::snprintf(line, sizeof line, "  failures     %zu\n", report.failures.size());
    out << line;
    for (const CheckFailure& f : report.failures) {
        std::snprintf(line, sizeof line, "  FAIL %-24s analytic % .12e  numeric % .12e\n",
                      format_coordinate(f.coord).c_str(), f.analytic, f.numeric);
        out << line;
    }
    return out.str();
}

std::string report_failure_table(const CheckReport& report) {
    std::ostringstream out;
    out << "site,layer,row,col,analytic,numeric,abs_err,rel_err\n";
    char line[256];
    for (const CheckFailure& f : report.failures) {
        const double abs_err = std::abs(f.analytic - f.numeric);
        const double scale = std::max(std::abs(f.analytic), std::abs(f.numeric));
        std::snprintf(line, sizeof line, "%s,%zu,%zu,%zu,%.17g,%.17g,%.17g,%.17g\n",
                      param_site_name(f.coord.site), f.coord.layer, f.coord.row, f.coord.col,
                      f.analytic, f.numeric, abs_err, scale > 0.0 ? abs_err / scale : 0.0);
        out << line;
    }
    return out.str();
}

}  // namespace vnn
