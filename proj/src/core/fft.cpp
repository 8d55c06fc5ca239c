#include "core/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace treering {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Unitary 1D DFT, in place, stride-aware. sign=-1 forward, +1 inverse.
void dft1d(cplx* x, int n, int stride, int sign) {
    if (n == 1) return;
    if (is_pow2(n)) {
        // bit-reversal permutation
        for (int i = 1, j = 0; i < n; ++i) {
            int bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(x[static_cast<std::int64_t>(i) * stride], x[static_cast<std::int64_t>(j) * stride]);
        }
        for (int len = 2; len <= n; len <<= 1) {
            const double ang = sign * 2.0 * kPi / len;
            for (int i = 0; i < n; i += len) {
                for (int j = 0; j < len / 2; ++j) {
                    const cplx w(std::cos(ang * j), std::sin(ang * j));
                    cplx& a = x[static_cast<std::int64_t>(i + j) * stride];
                    cplx& b = x[static_cast<std::int64_t>(i + j + len / 2) * stride];
                    const cplx u = a;
                    const cplx v = b * w;
                    a = u + v;
                    b = u - v;
                }
            }
        }
    } else {
        std::vector<cplx> out(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) {
            cplx acc(0.0, 0.0);
            for (int m = 0; m < n; ++m) {
                const double ang = sign * 2.0 * kPi * k * m / n;
                acc += x[static_cast<std::int64_t>(m) * stride] * cplx(std::cos(ang), std::sin(ang));
            }
            out[static_cast<size_t>(k)] = acc;
        }
        for (int k = 0; k < n; ++k) x[static_cast<std::int64_t>(k) * stride] = out[static_cast<size_t>(k)];
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k) x[static_cast<std::int64_t>(k) * stride] *= scale;
}

void dft2d(std::vector<cplx>& grid, int H, int W, int sign) {
    for (int y = 0; y < H; ++y) dft1d(grid.data() + static_cast<std::int64_t>(y) * W, W, 1, sign);
    for (int x = 0; x < W; ++x) dft1d(grid.data() + x, H, W, sign);
}

// natural index of centered index i
inline int uncenter_idx(int i, int n) { return (i - n / 2 + n) % n; }

std::vector<cplx> center(const std::vector<cplx>& nat, int H, int W) {
    std::vector<cplx> out(nat.size());
    for (int u = 0; u < H; ++u) {
        const int ky = uncenter_idx(u, H);
        for (int v = 0; v < W; ++v) {
            out[static_cast<size_t>(u) * W + v] = nat[static_cast<size_t>(ky) * W + uncenter_idx(v, W)];
        }
    }
    return out;
}

std::vector<cplx> uncenter(const std::vector<cplx>& cen, int H, int W) {
    std::vector<cplx> out(cen.size());
    for (int u = 0; u < H; ++u) {
        const int ky = uncenter_idx(u, H);
        for (int v = 0; v < W; ++v) {
            out[static_cast<size_t>(ky) * W + uncenter_idx(v, W)] = cen[static_cast<size_t>(u) * W + v];
        }
    }
    return out;
}

}  // namespace

std::vector<cplx> fft2_centered(const double* plane, int H, int W) {
    std::vector<cplx> grid(static_cast<size_t>(H) * W);
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(H) * W; ++i) grid[static_cast<size_t>(i)] = cplx(plane[i], 0.0);
    dft2d(grid, H, W, -1);
    return center(grid, H, W);
}

std::vector<cplx> fft2_centered(const std::vector<cplx>& in, int H, int W) {
    if (static_cast<int>(in.size()) != H * W) throw std::invalid_argument("fft2_centered: size mismatch");
    std::vector<cplx> grid = in;
    dft2d(grid, H, W, -1);
    return center(grid, H, W);
}

std::vector<cplx> ifft2_centered_complex(const std::vector<cplx>& spec, int H, int W) {
    if (static_cast<int>(spec.size()) != H * W) throw std::invalid_argument("ifft2_centered: size mismatch");
    std::vector<cplx> grid = uncenter(spec, H, W);
    dft2d(grid, H, W, +1);
    return grid;
}

std::vector<double> ifft2_centered_real(const std::vector<cplx>& spec, int H, int W) {
    const std::vector<cplx> grid = ifft2_centered_complex(spec, H, W);
    std::vector<double> out(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) out[i] = grid[i].real();
    return out;
}

std::vector<double> fft2_centered_adjoint(const std::vector<cplx>& grad_spec, int H, int W) {
    // d/dx Re(PFx), Im(PFx): adjoint = Re(F^T P^-1 conj(g)); F is symmetric.
    std::vector<cplx> g(grad_spec.size());
    for (size_t i = 0; i < grad_spec.size(); ++i) g[i] = std::conj(grad_spec[i]);
    std::vector<cplx> nat = uncenter(g, H, W);
    dft2d(nat, H, W, -1);
    std::vector<double> out(nat.size());
    for (size_t i = 0; i < nat.size(); ++i) out[i] = nat[i].real();
    return out;
}

std::vector<cplx> fft2_centered_chw(const Tensor& chw) {
    const int C = chw.dim(0), H = chw.dim(1), W = chw.dim(2);
    std::vector<cplx> out(static_cast<size_t>(C) * H * W);
    for (int c = 0; c < C; ++c) {
        const std::vector<cplx> s = fft2_centered(chw.data() + static_cast<std::int64_t>(c) * H * W, H, W);
        std::copy(s.begin(), s.end(), out.begin() + static_cast<std::int64_t>(c) * H * W);
    }
    return out;
}

std::pair<int, int> mirror_centered(int u, int v, int H, int W) {
    const int ky = uncenter_idx(u, H), kx = uncenter_idx(v, W);
    const int my = (H - ky) % H, mx = (W - kx) % W;
    return {(my + H / 2) % H, (mx + W / 2) % W};
}

}  // namespace treering
