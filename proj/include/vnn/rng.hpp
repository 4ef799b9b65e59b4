#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace vnn {

// Seeded random source used for parameter initialization and shuffling.
// The standard pins mt19937_64 bit-for-bit but leaves the distribution
// adapters implementation-defined, so the mappings from raw engine output
// to doubles and bounded integers are spelled out here. Identical seeds
// give identical streams on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1), from the top 53 bits of one engine draw.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform in {0, ..., n-1} by modulo reduction; n is tiny next to 2^64.
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    // Fisher-Yates, back to front.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace vnn
