#include "vnn/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace vnn {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_size(const std::string& s, std::size_t& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<Sample> Dataset::to_samples() const {
    std::vector<Sample> samples;
    samples.reserve(features.rows);
    for (std::size_t r = 0; r < features.rows; ++r) {
        Vec x(features.cols), y(targets.cols);
        for (std::size_t c = 0; c < features.cols; ++c) x[c] = features(r, c);
        for (std::size_t c = 0; c < targets.cols; ++c) y[c] = targets(r, c);
        samples.emplace_back(std::move(x), std::move(y));
    }
    return samples;
}

Dataset load_csv(const std::string& path, std::size_t n_targets, bool has_header) {
    std::ifstream in(path);
    if (!in) throw CsvError(path + ": cannot open file");
    if (n_targets == 0) throw CsvError(path + ": n_targets must be >= 1");
    const std::vector<std::string> lines = read_lines(in);

    Dataset data;
    std::vector<std::vector<double>> rows;
    std::size_t n_fields = 0;
    bool header_pending = has_header;

    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        if (trim(lines[ln]).empty()) continue;
        const std::vector<std::string> fields = split(lines[ln], ',');
        if (header_pending) {
            for (const std::string& f : fields) data.column_names.push_back(trim(f));
            header_pending = false;
            continue;
        }
        if (n_fields == 0) {
            n_fields = fields.size();
            if (!data.column_names.empty() && data.column_names.size() != n_fields) {
                throw CsvError(path + ": line " + std::to_string(ln + 1) + ": " +
                               std::to_string(fields.size()) + " fields but header has " +
                               std::to_string(data.column_names.size()));
            }
            if (n_fields < n_targets + 1) {
                throw CsvError(path + ": line " + std::to_string(ln + 1) + ": need at least " +
                               std::to_string(n_targets + 1) + " fields, got " +
                               std::to_string(n_fields));
            }
        } else if (fields.size() != n_fields) {
            throw CsvError(path + ": line " + std::to_string(ln + 1) + ": ragged row, expected " +
                           std::to_string(n_fields) + " fields, got " +
                           std::to_string(fields.size()));
        }
        std::vector<double> row(n_fields);
        for (std::size_t c = 0; c < n_fields; ++c) {
            double v = 0.0;
            if (!parse_double(trim(fields[c]), v) || !std::isfinite(v)) {
                throw CsvError(path + ": line " + std::to_string(ln + 1) + ", column " +
                               std::to_string(c + 1) + ": not a finite number: '" +
                               trim(fields[c]) + "'");
            }
            row[c] = v;
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw CsvError(path + ": no rows");

    const std::size_t d = n_fields - n_targets;
    data.features = Mat(rows.size(), d);
    data.targets = Mat(rows.size(), n_targets);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < d; ++c) data.features(r, c) = rows[r][c];
        for (std::size_t c = 0; c < n_targets; ++c) data.targets(r, c) = rows[r][d + c];
    }
    return data;
}

namespace {

constexpr const char* kMagic = "VNN 1";

void write_tensor(std::ostream& out, const std::string& name, std::size_t rows,
                  std::size_t cols, const double* data) {
    out << "tensor " << name << ' ' << rows << ' ' << cols << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            if (c) out << ' ';
            out << format_double(data[r * cols + c]);
        }
        out << '\n';
    }
}

struct CheckpointReader {
    const std::vector<std::string>& lines;
    const std::string& origin;
    std::size_t pos = 0;  // 0-based index of the next line

    std::string where() const { return origin + ": line " + std::to_string(pos + 1); }

    const std::string& next() {
        if (pos >= lines.size()) {
            throw CheckpointError(origin + ": unexpected end of file at line " +
                                  std::to_string(pos + 1));
        }
        return lines[pos++];
    }

    std::string expect_key(const std::string& key) {
        const std::string line = next();
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)) != key) {
            throw CheckpointError(where() + ": expected '" + key + " = ...'");
        }
        return trim(line.substr(eq + 1));
    }

    Mat expect_tensor(const std::string& name, std::size_t rows, std::size_t cols) {
        const std::string header = next();
        std::istringstream hs(header);
        std::string tag, got_name;
        std::size_t got_rows = 0, got_cols = 0;
        if (!(hs >> tag >> got_name >> got_rows >> got_cols) || tag != "tensor") {
            throw CheckpointError(where() + ": expected tensor header for '" + name + "'");
        }
        if (got_name != name) {
            throw CheckpointShapeError(where() + ": expected tensor '" + name + "', found '" +
                                       got_name + "'");
        }
        if (got_rows != rows || got_cols != cols) {
            throw CheckpointShapeError(where() + ": tensor '" + name + "' is " +
                                       std::to_string(got_rows) + "x" + std::to_string(got_cols) +
                                       ", header implies " + std::to_string(rows) + "x" +
                                       std::to_string(cols));
        }
        Mat m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            const std::string row_line = next();
            std::istringstream rs(row_line);
            std::string field;
            for (std::size_t c = 0; c < cols; ++c) {
                if (!(rs >> field) || !parse_double(field, m(r, c))) {
                    throw CheckpointError(where() + ": tensor '" + name + "' row " +
                                          std::to_string(r + 1) + ": bad value");
                }
            }
            if (rs >> field) {
                throw CheckpointShapeError(where() + ": tensor '" + name + "' row " +
                                           std::to_string(r + 1) + ": too many values");
            }
        }
        return m;
    }
};

}  // namespace

void write_checkpoint(const Network& net, std::ostream& out) {
    const BasisFamily& family = net.family();
    out << kMagic << '\n';
    out << "basis = " << basis_kind_name(family.kind) << '\n';
    out << "M = " << family.size << '\n';
    out << "omega = " << format_double(family.omega) << '\n';

    out << "widths = " << net.input_width();
    for (const Layer& layer : net.hidden) out << ',' << layer.out_width();
    out << ',' << net.output_width() << '\n';

    out << "mode = ";
    for (std::size_t l = 0; l < net.depth(); ++l) {
        if (l) out << ',';
        out << act_mode_name(net.hidden[l].act.mode);
    }
    out << '\n';

    out << "scaling = " << scaling_name(net.scaling) << '\n';
    out << "output_activation = " << (net.out_act ? "variational" : "none") << '\n';
    out << "seed = " << net.seed << '\n';

    for (std::size_t l = 0; l < net.depth(); ++l) {
        const Layer& layer = net.hidden[l];
        const std::string idx = std::to_string(l + 1);
        write_tensor(out, "W" + idx, layer.weights.rows, layer.weights.cols,
                     layer.weights.data.data());
        write_tensor(out, "b" + idx, 1, layer.bias.size(), layer.bias.data());
        write_tensor(out, "alpha" + idx, layer.act.coeffs.rows, layer.act.coeffs.cols,
                     layer.act.coeffs.data.data());
    }
    write_tensor(out, "WO", net.out_weights.rows, net.out_weights.cols,
                 net.out_weights.data.data());
    write_tensor(out, "bO", 1, net.out_bias.size(), net.out_bias.data());
    if (net.out_act) {
        write_tensor(out, "alphaO", net.out_act->coeffs.rows, net.out_act->coeffs.cols,
                     net.out_act->coeffs.data.data());
    }
}

Network read_checkpoint(std::istream& in, const std::string& origin) {
    const std::vector<std::string> lines = read_lines(in);
    CheckpointReader reader{lines, origin};

    if (reader.next() != kMagic) {
        throw CheckpointVersionError(origin + ": line 1: bad magic, expected '" +
                                     std::string(kMagic) + "'");
    }

    BasisFamily family;
    try {
        family.kind = basis_kind_from_name(reader.expect_key("basis"));
    } catch (const std::invalid_argument& e) {
        throw CheckpointError(origin + ": line 2: " + e.what());
    }
    if (!parse_size(reader.expect_key("M"), family.size)) {
        throw CheckpointError(origin + ": line 3: bad M");
    }
    if (!parse_double(reader.expect_key("omega"), family.omega)) {
        throw CheckpointError(origin + ": line 4: bad omega");
    }
    try {
        family = make_family(family.kind, family.size, family.omega);
    } catch (const std::invalid_argument& e) {
        throw CheckpointError(origin + ": invalid basis family: " + e.what());
    }

    std::vector<std::size_t> widths;
    for (const std::string& part : split(reader.expect_key("widths"), ',')) {
        std::size_t w = 0;
        if (!parse_size(trim(part), w) || w == 0) {
            throw CheckpointError(origin + ": line 5: bad widths entry '" + trim(part) + "'");
        }
        widths.push_back(w);
    }
    if (widths.size() < 3) {
        throw CheckpointShapeError(origin + ": line 5: widths must list [in, hidden..., out]");
    }
    const std::size_t depth = widths.size() - 2;

    std::vector<ActMode> modes;
    for (const std::string& part : split(reader.expect_key("mode"), ',')) {
        try {
            modes.push_back(act_mode_from_name(trim(part)));
        } catch (const std::invalid_argument& e) {
            throw CheckpointError(origin + ": line 6: " + e.what());
        }
    }
    if (modes.size() != depth) {
        throw CheckpointShapeError(origin + ": line 6: " + std::to_string(modes.size()) +
                                   " modes for " + std::to_string(depth) + " hidden layers");
    }

    Network net;
    try {
        net.scaling = scaling_from_name(reader.expect_key("scaling"));
    } catch (const std::invalid_argument& e) {
        throw CheckpointError(origin + ": line 7: " + e.what());
    }
    const std::string out_act_tag = reader.expect_key("output_activation");
    if (out_act_tag != "none" && out_act_tag != "variational") {
        throw CheckpointError(origin + ": line 8: output_activation must be none or variational");
    }
    if (!parse_u64(reader.expect_key("seed"), net.seed)) {
        throw CheckpointError(origin + ": line 9: bad seed");
    }

    for (std::size_t l = 0; l < depth; ++l) {
        const std::string idx = std::to_string(l + 1);
        Layer layer;
        layer.weights = reader.expect_tensor("W" + idx, widths[l], widths[l + 1]);
        const Mat bias = reader.expect_tensor("b" + idx, 1, widths[l + 1]);
        layer.bias = bias.data;
        layer.act.family = family;
        layer.act.mode = modes[l];
        layer.act.width = widths[l + 1];
        layer.act.coeffs = reader.expect_tensor(
            "alpha" + idx, family.size, modes[l] == ActMode::layer ? 1 : widths[l + 1]);
        net.hidden.push_back(std::move(layer));
    }
    net.out_weights = reader.expect_tensor("WO", widths[depth], widths[depth + 1]);
    const Mat out_bias = reader.expect_tensor("bO", 1, widths[depth + 1]);
    net.out_bias = out_bias.data;
    if (out_act_tag == "variational") {
        VariationalActivation act;
        act.family = family;
        act.mode = ActMode::layer;
        act.width = widths[depth + 1];
        act.coeffs = reader.expect_tensor("alphaO", family.size, 1);
        net.out_act = std::move(act);
    }

    while (reader.pos < lines.size()) {
        if (!trim(lines[reader.pos]).empty()) {
            throw CheckpointError(origin + ": line " + std::to_string(reader.pos + 1) +
                                  ": unexpected content after last tensor");
        }
        ++reader.pos;
    }

    if (!all_finite(net.out_weights) || !all_finite(net.out_bias)) {
        throw CheckpointError(origin + ": non-finite parameter");
    }
    for (const Layer& layer : net.hidden) {
        if (!all_finite(layer.weights) || !all_finite(layer.bias) ||
            !all_finite(layer.act.coeffs)) {
            throw CheckpointError(origin + ": non-finite parameter");
        }
    }
    return net;
}

void save_checkpoint(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw CheckpointError(path + ": cannot open for writing");
    write_checkpoint(net, out);
    if (!out) throw CheckpointError(path + ": write failed");
}

Network load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError(path + ": cannot open file");
    return read_checkpoint(in, path);
}

namespace {

struct KeyValue {
    std::string value;
    std::size_t line = 0;
};

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& origin) {
    static const std::set<std::string> known = {
        "layers", "basis", "M", "omega", "mode", "output", "loss", "lr_weights",
        "lr_alpha", "epochs", "batch_size", "seed", "shuffle", "log_every", "freeze_alpha"};

    const std::vector<std::string> lines = read_lines(in);
    std::vector<std::pair<std::string, KeyValue>> entries;

    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string line = trim(lines[ln]);
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ": line " + std::to_string(ln + 1) +
                              ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known.count(key)) {
            throw ConfigError(origin + ": line " + std::to_string(ln + 1) + ": unknown key '" +
                              key + "'");
        }
        for (const auto& [k, v] : entries) {
            if (k == key) {
                throw ConfigError(origin + ": line " + std::to_string(ln + 1) +
                                  ": duplicate key '" + key + "'");
            }
        }
        entries.push_back({key, {value, ln + 1}});
    }

    auto find = [&](const std::string& key) -> const KeyValue* {
        for (const auto& [k, v] : entries) {
            if (k == key) return &v;
        }
        return nullptr;
    };
    auto bad = [&](const std::string& key, const KeyValue& kv, const std::string& why) {
        return ConfigError(origin + ": line " + std::to_string(kv.line) + ": " + key + ": " +
                           why);
    };

    RunConfig cfg;

    const KeyValue* layers = find("layers");
    if (!layers) throw ConfigError(origin + ": missing required key 'layers'");
    for (const std::string& part : split(layers->value, ',')) {
        std::size_t w = 0;
        if (!parse_size(trim(part), w) || w == 0) {
            throw bad("layers", *layers, "bad width '" + trim(part) + "'");
        }
        cfg.widths.push_back(w);
    }
    if (cfg.widths.size() < 3) {
        throw bad("layers", *layers, "need [in, hidden..., out], at least one hidden layer");
    }

    const KeyValue* basis = find("basis");
    if (!basis) throw ConfigError(origin + ": missing required key 'basis'");
    try {
        cfg.basis = basis_kind_from_name(basis->value);
    } catch (const std::invalid_argument& e) {
        throw bad("basis", *basis, e.what());
    }

    const KeyValue* m = find("M");
    if (!m) throw ConfigError(origin + ": missing required key 'M'");
    if (!parse_size(m->value, cfg.basis_size) || cfg.basis_size == 0) {
        throw bad("M", *m, "must be a positive integer");
    }

    if (const KeyValue* kv = find("omega")) {
        if (!parse_double(kv->value, cfg.omega) || !(cfg.omega > 0.0)) {
            throw bad("omega", *kv, "must be a positive real");
        }
    }
    if (const KeyValue* kv = find("mode")) {
        try {
            cfg.mode = act_mode_from_name(kv->value);
        } catch (const std::invalid_argument& e) {
            throw bad("mode", *kv, e.what());
        }
    }
    if (const KeyValue* kv = find("output")) {
        try {
            cfg.output = scaling_from_name(kv->value);
        } catch (const std::invalid_argument& e) {
            throw bad("output", *kv, e.what());
        }
    }
    if (const KeyValue* kv = find("loss")) {
        try {
            cfg.loss = loss_kind_from_name(kv->value);
        } catch (const std::invalid_argument& e) {
            throw bad("loss", *kv, e.what());
        }
    }
    if (cfg.loss == LossKind::cross_entropy && cfg.output != Scaling::softmax) {
        throw ConfigError(origin + ": cross_entropy requires output = softmax");
    }

    if (const KeyValue* kv = find("lr_weights")) {
        if (!parse_double(kv->value, cfg.train.lr_weights) || cfg.train.lr_weights < 0.0) {
            throw bad("lr_weights", *kv, "must be a non-negative real");
        }
    }
    if (const KeyValue* kv = find("lr_alpha")) {
        if (!parse_double(kv->value, cfg.train.lr_alpha) || cfg.train.lr_alpha < 0.0) {
            throw bad("lr_alpha", *kv, "must be a non-negative real");
        }
    } else {
        cfg.train.lr_alpha = cfg.train.lr_weights;
    }
    if (const KeyValue* kv = find("epochs")) {
        if (!parse_size(kv->value, cfg.train.epochs)) {
            throw bad("epochs", *kv, "must be a non-negative integer");
        }
    }
    if (const KeyValue* kv = find("batch_size")) {
        if (!parse_size(kv->value, cfg.train.batch_size) || cfg.train.batch_size == 0) {
            throw bad("batch_size", *kv, "must be a positive integer");
        }
    }
    if (const KeyValue* kv = find("seed")) {
        if (!parse_u64(kv->value, cfg.train.seed)) {
            throw bad("seed", *kv, "must be an unsigned integer");
        }
    }
    if (const KeyValue* kv = find("shuffle")) {
        if (kv->value == "true") {
            cfg.train.shuffle = true;
        } else if (kv->value == "false") {
            cfg.train.shuffle = false;
        } else {
            throw bad("shuffle", *kv, "must be true or false");
        }
    }
    if (const KeyValue* kv = find("log_every")) {
        if (!parse_size(kv->value, cfg.train.log_every) || cfg.train.log_every == 0) {
            throw bad("log_every", *kv, "must be a positive integer");
        }
    }
    if (const KeyValue* kv = find("freeze_alpha")) {
        if (kv->value == "all") {
            cfg.freeze_all = true;
        } else {
            for (const std::string& part : split(kv->value, ',')) {
                std::size_t idx = 0;
                if (!parse_size(trim(part), idx) || idx == 0 ||
                    idx > cfg.widths.size() - 2) {
                    throw bad("freeze_alpha", *kv,
                              "layer index '" + trim(part) + "' out of range (1-based)");
                }
                cfg.freeze_alpha.push_back(idx - 1);
            }
        }
    }

    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    return parse_config(in, path);
}

Network build_network(const RunConfig& cfg) {
    const BasisFamily family = make_family(cfg.basis, cfg.basis_size, cfg.omega);
    Network net = make_network(cfg.widths, family, cfg.mode, cfg.output, cfg.train.seed);
    if (cfg.freeze_all) {
        for (Layer& layer : net.hidden) layer.trainable_alpha = false;
    } else {
        for (std::size_t idx : cfg.freeze_alpha) net.hidden[idx].trainable_alpha = false;
    }
    return net;
}

std::vector<CurvePoint> export_activation(const Network& net, std::size_t layer,
                                          std::optional<std::size_t> neuron, double x_min,
                                          double x_max, std::size_t steps) {
    if (steps < 2) throw std::invalid_argument("export_activation: steps must be >= 2");
    const VariationalActivation* act = nullptr;
    if (layer < net.depth()) {
        act = &net.hidden[layer].act;
    } else if (layer == net.depth() && net.out_act) {
        act = &*net.out_act;
    } else {
        throw std::out_of_range("export_activation: invalid layer index " +
                                std::to_string(layer));
    }

    std::size_t col = 0;
    if (act->mode == ActMode::neuron) {
        if (!neuron) {
            throw std::invalid_argument("export_activation: neuron-mode layer needs a neuron");
        }
        if (*neuron >= act->width) {
            throw std::out_of_range("export_activation: neuron index out of range");
        }
        col = *neuron;
    } else if (neuron) {
        throw std::invalid_argument("export_activation: layer-mode layer takes no neuron");
    }

    std::vector<CurvePoint> curve;
    curve.reserve(steps);
    const double span = (x_max - x_min) / static_cast<double>(steps - 1);
    for (std::size_t k = 0; k < steps; ++k) {
        const double x = x_min + static_cast<double>(k) * span;
        curve.push_back({x, activation_value_at(*act, col, x),
                         activation_deriv_at(*act, col, x)});
    }
    return curve;
}

void write_activation_csv(const std::vector<CurvePoint>& curve, std::ostream& out) {
    out << "x,F,dF\n";
    for (const CurvePoint& p : curve) {
        out << format_double(p.x) << ',' << format_double(p.value) << ','
            << format_double(p.deriv) << '\n';
    }
}

}  // namespace vnn
