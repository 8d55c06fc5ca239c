#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "core/tensor.hpp"

namespace treering {

// Deterministic RNG. mt19937_64 streams are bit-exact everywhere; the
// uniform/normal transforms below are written out explicitly because the
// <random> distributions are implementation-defined and would break the
// byte-identical reruns the harness promises.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Inclusive range. Modulo bias is immaterial for the ranges used here.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // Box-Muller; consumes exactly two uniforms per draw.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    void fill_normal(Tensor& t, double stddev = 1.0) {
        for (std::int64_t i = 0; i < t.size(); ++i) t[i] = stddev * normal();
    }

    Tensor normal_tensor(std::vector<int> shape, double stddev = 1.0) {
        Tensor t(std::move(shape));
        fill_normal(t, stddev);
        return t;
    }

    // Fisher-Yates.
    std::vector<int> permutation(int n) {
        std::vector<int> p(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) {
            const int j = uniform_int(0, i);
            std::swap(p[static_cast<size_t>(i)], p[static_cast<size_t>(j)]);
        }
        return p;
    }

    // Child seed for a named purpose so stages never share a stream.
    static std::uint64_t derive(std::uint64_t master, std::string_view tag);

private:
    std::mt19937_64 gen_;
};

}  // namespace treering
