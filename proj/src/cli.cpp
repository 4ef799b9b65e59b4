#include "vnn/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>

#include "vnn/grad_check.hpp"
#include "vnn/io.hpp"
#include "vnn/rng.hpp"

namespace vnn {

namespace {

std::pair<double, double> parse_range(const std::string& range) {
    const std::size_t colon = range.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == range.size()) {
        throw std::invalid_argument("--range expects A:B, got '" + range + "'");
    }
    const std::string a = range.substr(0, colon);
    const std::string b = range.substr(colon + 1);
    try {
        return {std::stod(a), std::stod(b)};
    } catch (const std::exception&) {
        throw std::invalid_argument("--range expects numbers A:B, got '" + range + "'");
    }
}

void print_history(const TrainHistory& history) {
    for (const LogEntry& e : history.entries) {
        std::cout << "epoch " << e.epoch << " train_loss " << format_double(e.train_loss);
        if (e.val_loss) std::cout << " val_loss " << format_double(*e.val_loss);
        std::cout << '\n';
    }
}

int run_train(const std::string& config_path, const std::string& data_path,
              const std::string& val_path, const std::string& out_path, bool header) {
    const RunConfig cfg = parse_config_file(config_path);
    const std::size_t n_targets = cfg.widths.back();
    const Dataset data = load_csv(data_path, n_targets, header);
    const std::vector<Sample> train_set = data.to_samples();

    std::vector<Sample> val_set;
    if (!val_path.empty()) {
        val_set = load_csv(val_path, n_targets, header).to_samples();
    }

    Network net = build_network(cfg);
    const TrainHistory history =
        train(net, train_set, val_set.empty() ? nullptr : &val_set, cfg.loss, cfg.train);
    print_history(history);
    if (!history.entries.empty()) {
        std::cout << "final_train_loss " << format_double(history.final_train_loss()) << '\n';
    }
    std::cout << "wall_seconds " << format_double(history.wall_seconds) << '\n';
    save_checkpoint(net, out_path);
    std::cout << "saved " << out_path << '\n';
    return 0;
}

int run_eval(const std::string& model_path, const std::string& data_path, bool header) {
    const Network net = load_checkpoint(model_path);
    const Dataset data = load_csv(data_path, net.output_width(), header);
    const std::vector<Sample> samples = data.to_samples();

    // softmax models are classifiers; everything else is scored with mse
    const LossKind kind =
        net.scaling == Scaling::softmax ? LossKind::cross_entropy : LossKind::mse;
    std::cout << "loss = " << format_double(dataset_mean_loss(net, samples, kind)) << '\n';

    if (net.scaling == Scaling::softmax) {
        std::size_t hits = 0;
        for (const Sample& s : samples) {
            const Vec out = predict(net, s.first);
            const std::size_t got =
                std::max_element(out.begin(), out.end()) - out.begin();
            const std::size_t want =
                std::max_element(s.second.begin(), s.second.end()) - s.second.begin();
            if (got == want) ++hits;
        }
        std::cout << "accuracy = "
                  << format_double(static_cast<double>(hits) /
                                   static_cast<double>(samples.size()))
                  << '\n';
    }
    return 0;
}

std::vector<Sample> synthetic_samples(const Network& net, std::uint64_t seed,
                                      std::size_t count) {
    Rng rng(seed + 1);
    std::vector<Sample> samples;
    for (std::size_t s = 0; s < count; ++s) {
        Vec x(net.input_width());
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        Vec y(net.output_width(), 0.0);
        if (net.scaling == Scaling::softmax) {
            y[static_cast<std::size_t>(rng.below(y.size()))] = 1.0;
        } else if (net.scaling == Scaling::sigmoid) {
            for (double& v : y) v = rng.uniform(0.0, 1.0);
        } else {
            for (double& v : y) v = rng.uniform(-1.0, 1.0);
        }
        samples.emplace_back(std::move(x), std::move(y));
    }
    return samples;
}

int run_gradcheck(const std::string& config_path, std::optional<std::uint64_t> seed,
                  double rel_tol, const std::string& report_path) {
    RunConfig cfg = parse_config_file(config_path);
    if (seed) cfg.train.seed = *seed;

    Network net = build_network(cfg);
    std::vector<Sample> samples = synthetic_samples(net, cfg.train.seed, 4);
    nudge_away_from_kinks(net, samples);

    CheckSettings settings;
    settings.rel_tol = rel_tol;
    settings.seed = cfg.train.seed;
    const CheckReport report = check_gradients(net, samples, cfg.loss, settings);
    std::cout << format_report(report);

    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw std::runtime_error(report_path + ": cannot open for writing");
        out << report_failure_table(report);
    }
    return report.ok() ? 0 : 3;
}

int run_export(const std::string& model_path, std::size_t layer1,
               std::optional<std::size_t> neuron1, const std::string& range,
               std::size_t steps, const std::string& out_path) {
    const Network net = load_checkpoint(model_path);
    if (layer1 == 0) throw std::invalid_argument("--layer is 1-based");
    if (neuron1 && *neuron1 == 0) throw std::invalid_argument("--neuron is 1-based");
    const auto [x_min, x_max] = parse_range(range);
    std::optional<std::size_t> neuron;
    if (neuron1) neuron = *neuron1 - 1;
    const std::vector<CurvePoint> curve =
        export_activation(net, layer1 - 1, neuron, x_min, x_max, steps);
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error(out_path + ": cannot open for writing");
    write_activation_csv(curve, out);
    std::cout << "wrote " << curve.size() << " points to " << out_path << '\n';
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"dense networks with trainable basis-expansion activations"};
    app.require_subcommand(1);

    std::string config_path, data_path, val_path, out_path, model_path, range, report_path;
    bool header = false;
    std::size_t layer1 = 0, steps = 0;
    std::uint64_t seed_value = 0;
    double rel_tol = 1e-6;
    std::optional<std::size_t> neuron1;
    std::optional<std::uint64_t> seed;

    CLI::App* cmd_train = app.add_subcommand("train", "train a model from a config and CSV data");
    cmd_train->add_option("--config", config_path, "run configuration file")->required();
    cmd_train->add_option("--data", data_path, "training CSV")->required();
    cmd_train->add_option("--val", val_path, "validation CSV");
    cmd_train->add_option("--out", out_path, "checkpoint to write")->required();
    cmd_train->add_flag("--header", header, "CSV files start with a header row");

    CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate a checkpoint on CSV data");
    cmd_eval->add_option("--model", model_path, "checkpoint to load")->required();
    cmd_eval->add_option("--data", data_path, "evaluation CSV")->required();
    cmd_eval->add_flag("--header", header, "CSV file starts with a header row");

    CLI::App* cmd_check = app.add_subcommand(
        "gradcheck", "compare analytic gradients with finite differences");
    cmd_check->add_option("--config", config_path, "run configuration file")->required();
    CLI::Option* seed_opt = cmd_check->add_option("--seed", seed_value, "override config seed");
    cmd_check->add_option("--tol", rel_tol, "relative tolerance")->check(CLI::PositiveNumber);
    cmd_check->add_option("--report", report_path, "write a CSV row per failure");

    CLI::App* cmd_export = app.add_subcommand(
        "export-activation", "sample a learned activation on a grid");
    cmd_export->add_option("--model", model_path, "checkpoint to load")->required();
    cmd_export->add_option("--layer", layer1, "hidden layer, 1-based")->required();
    std::size_t neuron_value = 0;
    CLI::Option* neuron_opt =
        cmd_export->add_option("--neuron", neuron_value, "neuron, 1-based (neuron mode only)");
    cmd_export->add_option("--range", range, "grid range A:B")->required();
    cmd_export->add_option("--steps", steps, "grid points, >= 2")->required();
    cmd_export->add_option("--out", out_path, "CSV to write")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_train->parsed()) {
            return run_train(config_path, data_path, val_path, out_path, header);
        }
        if (cmd_eval->parsed()) {
            return run_eval(model_path, data_path, header);
        }
        if (cmd_check->parsed()) {
            if (seed_opt->count() > 0) seed = seed_value;
            return run_gradcheck(config_path, seed, rel_tol, report_path);
        }
        if (cmd_export->parsed()) {
            if (neuron_opt->count() > 0) neuron1 = neuron_value;
            return run_export(model_path, layer1, neuron1, range, steps, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace vnn
