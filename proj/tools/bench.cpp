// Times the OpenMP kernels against their serial references on a synthetic
// workload and verifies that both produce bit-identical results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "vnn/grad_check.hpp"
#include "vnn/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_best_of(int repeats, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto start = Clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - start).count());
    }
    return best;
}

bool grads_equal(const vnn::GradientSet& a, const vnn::GradientSet& b) {
    for (std::size_t l = 0; l < a.d_weights.size(); ++l) {
        if (a.d_weights[l].data != b.d_weights[l].data) return false;
        if (a.d_bias[l] != b.d_bias[l]) return false;
        if (a.d_alpha[l].data != b.d_alpha[l].data) return false;
    }
    return a.d_out_weights.data == b.d_out_weights.data && a.d_out_bias == b.d_out_bias;
}

void print_row(const char* name, double serial, double parallel) {
    std::printf("%-18s %10.3f ms %10.3f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
                serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t n_samples = 512;
    std::size_t width = 24;
    std::size_t depth = 3;
    std::size_t m = 6;
    int repeats = 5;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        const std::size_t value = std::strtoull(argv[i + 1], nullptr, 10);
        if (flag == "--samples") n_samples = value;
        else if (flag == "--width") width = value;
        else if (flag == "--depth") depth = value;
        else if (flag == "--m") m = value;
        else if (flag == "--repeat") repeats = static_cast<int>(value);
        else {
            std::fprintf(stderr, "usage: vnn-bench [--samples N] [--width W] [--depth D] "
                                 "[--m M] [--repeat R]\n");
            return 1;
        }
    }

    std::vector<std::size_t> widths(depth + 2, width);
    widths.back() = 4;
    const vnn::BasisFamily family = vnn::make_family(vnn::BasisKind::fourier, m, 1.0);
    const vnn::Network net = vnn::make_network(widths, family, vnn::ActMode::neuron,
                                               vnn::Scaling::identity, 7);

    vnn::Rng rng(11);
    std::vector<vnn::Sample> samples;
    for (std::size_t s = 0; s < n_samples; ++s) {
        vnn::Vec x(net.input_width()), y(net.output_width());
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        for (double& v : y) v = rng.uniform(-1.0, 1.0);
        samples.emplace_back(std::move(x), std::move(y));
    }

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("network: ");
    for (std::size_t w : widths) std::printf("%zu ", w);
    std::printf(" M=%zu  samples=%zu\n\n", m, n_samples);
    std::printf("%-18s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    const vnn::GradientSet serial_grads =
        vnn::batch_backward_serial(net, samples, vnn::LossKind::mse);
    const vnn::GradientSet parallel_grads = vnn::batch_backward(net, samples, vnn::LossKind::mse);
    if (!grads_equal(serial_grads, parallel_grads)) {
        std::fprintf(stderr, "batch_backward: serial and parallel results differ\n");
        return 1;
    }
    print_row("batch_backward",
              time_best_of(repeats,
                           [&] { vnn::batch_backward_serial(net, samples, vnn::LossKind::mse); }),
              time_best_of(repeats,
                           [&] { vnn::batch_backward(net, samples, vnn::LossKind::mse); }));

    const std::vector<vnn::Sample> few(samples.begin(), samples.begin() + 4);
    vnn::CheckSettings settings;
    const vnn::CheckReport serial_report =
        vnn::check_gradients_serial(net, few, vnn::LossKind::mse, settings);
    const vnn::CheckReport parallel_report =
        vnn::check_gradients(net, few, vnn::LossKind::mse, settings);
    if (serial_report.max_rel_err != parallel_report.max_rel_err ||
        serial_report.n_checked != parallel_report.n_checked) {
        std::fprintf(stderr, "check_gradients: serial and parallel reports differ\n");
        return 1;
    }
    print_row("check_gradients",
              time_best_of(repeats,
                           [&] { vnn::check_gradients_serial(net, few, vnn::LossKind::mse,
                                                             settings); }),
              time_best_of(repeats,
                           [&] { vnn::check_gradients(net, few, vnn::LossKind::mse, settings); }));
    return 0;
}
