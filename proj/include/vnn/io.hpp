#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnn/loss.hpp"
#include "vnn/network.hpp"
#include "vnn/optim.hpp"

namespace vnn {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CheckpointVersionError : CheckpointError {
    using CheckpointError::CheckpointError;
};
struct CheckpointShapeError : CheckpointError {
    using CheckpointError::CheckpointError;
};

struct Dataset {
    Mat features;  // samples x d
    Mat targets;   // samples x k
    std::vector<std::string> column_names;  // empty when the file has no header

    std::size_t size() const { return features.rows; }
    std::vector<Sample> to_samples() const;
};

// Numeric CSV, dot decimal separator only; the trailing n_targets columns
// are targets. Reports ragged rows and bad fields with line/column numbers.
Dataset load_csv(const std::string& path, std::size_t n_targets, bool has_header);

// Text checkpoint, line oriented: magic "VNN 1", then a key = value header
// (basis, M, omega, widths, mode, scaling, output_activation, seed), then
// one section per parameter tensor in row-major order at 17 significant
// digits. Round-trip reproduces bit-identical predictions.
void save_checkpoint(const Network& net, const std::string& path);
Network load_checkpoint(const std::string& path);
void write_checkpoint(const Network& net, std::ostream& out);
Network read_checkpoint(std::istream& in, const std::string& origin);

// Run configuration: `key = value` lines, '#' comments. Keys: layers,
// basis, M, omega, mode, output, loss, lr_weights, lr_alpha, epochs,
// batch_size, seed, shuffle, log_every, freeze_alpha. Unknown keys are
// errors. freeze_alpha takes "all" or a comma list of 1-based hidden
// layers. lr_alpha defaults to lr_weights.
struct RunConfig {
    std::vector<std::size_t> widths;  // full chain [in, hidden..., out]
    BasisKind basis = BasisKind::fourier;
    std::size_t basis_size = 1;  // M
    double omega = 1.0;
    ActMode mode = ActMode::layer;
    Scaling output = Scaling::identity;
    LossKind loss = LossKind::mse;
    TrainConfig train;
    std::vector<std::size_t> freeze_alpha;  // 0-based hidden layers
    bool freeze_all = false;
};

RunConfig parse_config(std::istream& in, const std::string& origin);
RunConfig parse_config_file(const std::string& path);

// Seeded network matching the config, freeze flags applied.
Network build_network(const RunConfig& cfg);

struct CurvePoint {
    double x = 0.0;
    double value = 0.0;  // F(x)
    double deriv = 0.0;  // F'(x)
};

// Samples the learned activation of one hidden layer (0-based; depth()
// addresses the variational output activation when present) on a uniform
// grid of `steps` points. neuron must be given exactly for neuron-mode
// layers (0-based).
std::vector<CurvePoint> export_activation(const Network& net, std::size_t layer,
                                          std::optional<std::size_t> neuron, double x_min,
                                          double x_max, std::size_t steps);

// CSV with header x,F,dF at 17 significant digits.
void write_activation_csv(const std::vector<CurvePoint>& curve, std::ostream& out);

// %.17g, enough digits to round-trip any double.
std::string format_double(double v);

}  // namespace vnn
