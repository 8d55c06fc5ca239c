// Times the OpenMP conv kernels against the serial reference on the shapes
// the pipeline actually runs (latent U-Net blocks, surrogate stacks, VAE
// stages) and checks they agree bit-for-bit.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "core/kernels.hpp"
#include "core/rng.hpp"
#include "core/tensor.hpp"

using namespace treering;
using kernels::ConvDims;

namespace {

struct Case {
    std::string name;
    int N, Cin, H, W, Cout, K, stride, pad;
};

double flops_forward(const ConvDims& d) {
    return 2.0 * d.N * d.Cout * d.out_h() * d.out_w() * d.Cin * d.K * d.K;
}

template <typename F>
double time_best_ms(F&& fn, int iters) {
    double best = 1e30;
    for (int i = 0; i < iters; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

}  // namespace

int main() {
    const std::vector<Case> cases = {
        {"latent-resblock 16x16", 32, 24, 16, 16, 24, 3, 1, 1},
        {"latent-resblock 8x8", 32, 48, 8, 8, 48, 3, 1, 1},
        {"pixel-resblock 32x32", 32, 16, 32, 32, 16, 3, 1, 1},
        {"vae-encoder 32x32", 32, 24, 32, 32, 24, 3, 1, 1},
        {"surrogate 16x16", 32, 8, 16, 16, 8, 3, 1, 1},
        {"downsample 16->8", 32, 24, 16, 16, 48, 3, 2, 1},
    };
    std::printf("%-24s %10s %10s %10s %10s %8s\n", "case", "ref ms", "omp ms", "ref GF/s", "omp GF/s", "match");
    Rng rng(7);
    for (const Case& c : cases) {
        ConvDims d;
        d.N = c.N;
        d.Cin = c.Cin;
        d.H = c.H;
        d.W = c.W;
        d.Cout = c.Cout;
        d.K = c.K;
        d.stride = c.stride;
        d.pad = c.pad;
        Tensor x = rng.normal_tensor({c.N, c.Cin, c.H, c.W});
        Tensor w = rng.normal_tensor({c.Cout, c.Cin, c.K, c.K});
        Tensor b = rng.normal_tensor({c.Cout});
        Tensor y_ref({c.N, c.Cout, d.out_h(), d.out_w()});
        Tensor y_omp(y_ref.shape());
        const double gf = flops_forward(d) / 1e9;
        const double tr = time_best_ms([&] { kernels::conv2d_forward_ref(x.data(), w.data(), b.data(), y_ref.data(), d); }, 5);
        const double to = time_best_ms([&] { kernels::conv2d_forward(x.data(), w.data(), b.data(), y_omp.data(), d); }, 5);
        const bool match = max_abs_diff(y_ref, y_omp) == 0.0;
        std::printf("%-24s %10.3f %10.3f %10.2f %10.2f %8s\n", c.name.c_str(), tr, to, gf / tr * 1e3, gf / to * 1e3,
                    match ? "yes" : "NO");

        // backward kernels, same shape
        Tensor gy = rng.normal_tensor(y_ref.shape());
        Tensor gx_ref(x.shape()), gx_omp(x.shape());
        Tensor gw_ref(w.shape()), gw_omp(w.shape());
        Tensor gb_ref(b.shape()), gb_omp(b.shape());
        const double tr_i =
            time_best_ms([&] { kernels::conv2d_input_grad_ref(gy.data(), w.data(), gx_ref.data(), d); }, 5);
        const double to_i = time_best_ms([&] { kernels::conv2d_input_grad(gy.data(), w.data(), gx_omp.data(), d); }, 5);
        gw_ref.fill(0.0);
        gw_omp.fill(0.0);
        const double tr_w = time_best_ms(
            [&] { kernels::conv2d_weight_grad_ref(x.data(), gy.data(), gw_ref.data(), gb_ref.data(), d); }, 5);
        const double to_w =
            time_best_ms([&] { kernels::conv2d_weight_grad(x.data(), gy.data(), gw_omp.data(), gb_omp.data(), d); }, 5);
        const bool match_b = max_abs_diff(gx_ref, gx_omp) == 0.0;
        std::printf("%-24s %10.3f %10.3f %10.2f %10.2f %8s\n", "  input-grad", tr_i, to_i, gf / tr_i * 1e3,
                    gf / to_i * 1e3, match_b ? "yes" : "NO");
        std::printf("%-24s %10.3f %10.3f %10.2f %10.2f\n", "  weight-grad", tr_w, to_w, gf / tr_w * 1e3,
                    gf / to_w * 1e3);
    }
    return 0;
}
