#include "core/kernels.hpp"

#include <omp.h>

// The OpenMP kernels below carry fast paths for the 3x3/stride-1/pad-1 case
// that dominates every model in the lab. Accumulation order per output
// element is identical to the *_ref implementations (same (ic,ky,kx) and
// (n,oy,ox) sequences, no reassociation), so omp and ref results match
// bit-for-bit and are independent of the thread count.

namespace treering::kernels {

namespace {

// --- generic (reference-structure) plane helpers ---------------------------

inline void forward_plane(const double* xs, const double* w, double* yp, const ConvDims& d, int oc, double alpha) {
    const int Ho = d.out_h(), Wo = d.out_w();
    for (int ic = 0; ic < d.Cin; ++ic) {
        const double* xc = xs + static_cast<std::int64_t>(ic) * d.H * d.W;
        const double* wk = w + ((static_cast<std::int64_t>(oc) * d.Cin + ic) * d.K) * d.K;
        for (int ky = 0; ky < d.K; ++ky) {
            for (int kx = 0; kx < d.K; ++kx) {
                const double wv = alpha * wk[ky * d.K + kx];
                for (int oy = 0; oy < Ho; ++oy) {
                    const int iy = oy * d.stride - d.pad + ky;
                    if (iy < 0 || iy >= d.H) continue;
                    const double* xrow = xc + static_cast<std::int64_t>(iy) * d.W;
                    double* yrow = yp + static_cast<std::int64_t>(oy) * Wo;
                    const int x0 = -d.pad + kx;
                    for (int ox = 0; ox < Wo; ++ox) {
                        const int ix = ox * d.stride + x0;
                        if (ix >= 0 && ix < d.W) yrow[ox] += wv * xrow[ix];
                    }
                }
            }
        }
    }
}

inline void input_grad_plane(const double* gys, const double* w, double* gxp, const ConvDims& d, int ic,
                             double alpha) {
    const int Ho = d.out_h(), Wo = d.out_w();
    for (int oc = 0; oc < d.Cout; ++oc) {
        const double* gyc = gys + static_cast<std::int64_t>(oc) * Ho * Wo;
        const double* wk = w + ((static_cast<std::int64_t>(oc) * d.Cin + ic) * d.K) * d.K;
        for (int ky = 0; ky < d.K; ++ky) {
            for (int kx = 0; kx < d.K; ++kx) {
                const double wv = alpha * wk[ky * d.K + kx];
                for (int oy = 0; oy < Ho; ++oy) {
                    const int iy = oy * d.stride - d.pad + ky;
                    if (iy < 0 || iy >= d.H) continue;
                    double* gxrow = gxp + static_cast<std::int64_t>(iy) * d.W;
                    const double* gyrow = gyc + static_cast<std::int64_t>(oy) * Wo;
                    const int x0 = -d.pad + kx;
                    for (int ox = 0; ox < Wo; ++ox) {
                        const int ix = ox * d.stride + x0;
                        if (ix >= 0 && ix < d.W) gxrow[ix] += wv * gyrow[ox];
                    }
                }
            }
        }
    }
}

inline void weight_grad_pair(const double* x, const double* gy, double* gwk, const ConvDims& d, int oc, int ic,
                             double alpha) {
    const int Ho = d.out_h(), Wo = d.out_w();
    const std::int64_t sx = d.x_stride(), sy = d.y_stride();
    for (int ky = 0; ky < d.K; ++ky) {
        for (int kx = 0; kx < d.K; ++kx) {
            double acc = 0.0;
            for (int n = 0; n < d.N; ++n) {
                const double* xc = x + n * sx + static_cast<std::int64_t>(ic) * d.H * d.W;
                const double* gyc = gy + n * sy + static_cast<std::int64_t>(oc) * Ho * Wo;
                for (int oy = 0; oy < Ho; ++oy) {
                    const int iy = oy * d.stride - d.pad + ky;
                    if (iy < 0 || iy >= d.H) continue;
                    const double* xrow = xc + static_cast<std::int64_t>(iy) * d.W;
                    const double* gyrow = gyc + static_cast<std::int64_t>(oy) * Wo;
                    const int x0 = -d.pad + kx;
                    for (int ox = 0; ox < Wo; ++ox) {
                        const int ix = ox * d.stride + x0;
                        if (ix >= 0 && ix < d.W) acc += xrow[ix] * gyrow[ox];
                    }
                }
            }
            gwk[ky * d.K + kx] += alpha * acc;
        }
    }
}

// --- 3x3 / stride 1 / pad 1 fast paths --------------------------------------

inline void forward_plane_k3(const double* xs, const double* w, double* yp, const ConvDims& d, int oc, double alpha) {
    const int H = d.H, W = d.W;
    for (int ic = 0; ic < d.Cin; ++ic) {
        const double* xc = xs + static_cast<std::int64_t>(ic) * H * W;
        const double* wk = w + ((static_cast<std::int64_t>(oc) * d.Cin + ic) * 3) * 3;
        const double w00 = alpha * wk[0], w01 = alpha * wk[1], w02 = alpha * wk[2];
        const double w10 = alpha * wk[3], w11 = alpha * wk[4], w12 = alpha * wk[5];
        const double w20 = alpha * wk[6], w21 = alpha * wk[7], w22 = alpha * wk[8];
        for (int oy = 0; oy < H; ++oy) {
            double* yrow = yp + static_cast<std::int64_t>(oy) * W;
            const double* r0 = oy > 0 ? xc + static_cast<std::int64_t>(oy - 1) * W : nullptr;
            const double* r1 = xc + static_cast<std::int64_t>(oy) * W;
            const double* r2 = oy < H - 1 ? xc + static_cast<std::int64_t>(oy + 1) * W : nullptr;
            {  // ox = 0
                double acc = yrow[0];
                if (r0) {
                    acc += w01 * r0[0];
                    acc += w02 * r0[1];
                }
                acc += w11 * r1[0];
                acc += w12 * r1[1];
                if (r2) {
                    acc += w21 * r2[0];
                    acc += w22 * r2[1];
                }
                yrow[0] = acc;
            }
            if (r0 && r2) {
                for (int ox = 1; ox < W - 1; ++ox) {
                    double acc = yrow[ox];
                    acc += w00 * r0[ox - 1];
                    acc += w01 * r0[ox];
                    acc += w02 * r0[ox + 1];
                    acc += w10 * r1[ox - 1];
                    acc += w11 * r1[ox];
                    acc += w12 * r1[ox + 1];
                    acc += w20 * r2[ox - 1];
                    acc += w21 * r2[ox];
                    acc += w22 * r2[ox + 1];
                    yrow[ox] = acc;
                }
            } else {
                for (int ox = 1; ox < W - 1; ++ox) {
                    double acc = yrow[ox];
                    if (r0) {
                        acc += w00 * r0[ox - 1];
                        acc += w01 * r0[ox];
                        acc += w02 * r0[ox + 1];
                    }
                    acc += w10 * r1[ox - 1];
                    acc += w11 * r1[ox];
                    acc += w12 * r1[ox + 1];
                    if (r2) {
                        acc += w20 * r2[ox - 1];
                        acc += w21 * r2[ox];
                        acc += w22 * r2[ox + 1];
                    }
                    yrow[ox] = acc;
                }
            }
            if (W > 1) {  // ox = W-1
                const int ox = W - 1;
                double acc = yrow[ox];
                if (r0) {
                    acc += w00 * r0[ox - 1];
                    acc += w01 * r0[ox];
                }
                acc += w10 * r1[ox - 1];
                acc += w11 * r1[ox];
                if (r2) {
                    acc += w20 * r2[ox - 1];
                    acc += w21 * r2[ox];
                }
                yrow[ox] = acc;
            }
        }
    }
}

// Gradient w.r.t. input for the 3x3/s1/p1 case. Per gx element the (oc,ky,kx)
// accumulation order matches the reference exactly.
inline void input_grad_plane_k3(const double* gys, const double* w, double* gxp, const ConvDims& d, int ic,
                                double alpha) {
    const int H = d.H, W = d.W;
    for (int oc = 0; oc < d.Cout; ++oc) {
        const double* gyc = gys + static_cast<std::int64_t>(oc) * H * W;
        const double* wk = w + ((static_cast<std::int64_t>(oc) * d.Cin + ic) * 3) * 3;
        const double w00 = alpha * wk[0], w01 = alpha * wk[1], w02 = alpha * wk[2];
        const double w10 = alpha * wk[3], w11 = alpha * wk[4], w12 = alpha * wk[5];
        const double w20 = alpha * wk[6], w21 = alpha * wk[7], w22 = alpha * wk[8];
        for (int iy = 0; iy < H; ++iy) {
            double* gxrow = gxp + static_cast<std::int64_t>(iy) * W;
            // contribution of kernel row ky comes from gy row oy = iy + 1 - ky
            const double* g0 = iy + 1 < H ? gyc + static_cast<std::int64_t>(iy + 1) * W : nullptr;  // ky=0
            const double* g1 = gyc + static_cast<std::int64_t>(iy) * W;                             // ky=1
            const double* g2 = iy - 1 >= 0 ? gyc + static_cast<std::int64_t>(iy - 1) * W : nullptr;  // ky=2
            {  // ix = 0: kx=2 tap (gy[ix-1]) is out of range
                double acc = gxrow[0];
                if (g0) {
                    acc += w00 * g0[1];
                    acc += w01 * g0[0];
                }
                acc += w10 * g1[1];
                acc += w11 * g1[0];
                if (g2) {
                    acc += w20 * g2[1];
                    acc += w21 * g2[0];
                }
                gxrow[0] = acc;
            }
            if (g0 && g2) {
                for (int ix = 1; ix < W - 1; ++ix) {
                    double acc = gxrow[ix];
                    acc += w00 * g0[ix + 1];
                    acc += w01 * g0[ix];
                    acc += w02 * g0[ix - 1];
                    acc += w10 * g1[ix + 1];
                    acc += w11 * g1[ix];
                    acc += w12 * g1[ix - 1];
                    acc += w20 * g2[ix + 1];
                    acc += w21 * g2[ix];
                    acc += w22 * g2[ix - 1];
                    gxrow[ix] = acc;
                }
            } else {
                for (int ix = 1; ix < W - 1; ++ix) {
                    double acc = gxrow[ix];
                    if (g0) {
                        acc += w00 * g0[ix + 1];
                        acc += w01 * g0[ix];
                        acc += w02 * g0[ix - 1];
                    }
                    acc += w10 * g1[ix + 1];
                    acc += w11 * g1[ix];
                    acc += w12 * g1[ix - 1];
                    if (g2) {
                        acc += w20 * g2[ix + 1];
                        acc += w21 * g2[ix];
                        acc += w22 * g2[ix - 1];
                    }
                    gxrow[ix] = acc;
                }
            }
            if (W > 1) {  // ix = W-1: kx=0 tap (gy[ix+1]) is out of range
                const int ix = W - 1;
                double acc = gxrow[ix];
                if (g0) {
                    acc += w01 * g0[ix];
                    acc += w02 * g0[ix - 1];
                }
                acc += w11 * g1[ix];
                acc += w12 * g1[ix - 1];
                if (g2) {
                    acc += w21 * g2[ix];
                    acc += w22 * g2[ix - 1];
                }
                gxrow[ix] = acc;
            }
        }
    }
}

// Single pass over (n,oy,ox) with nine register accumulators; per-(ky,kx)
// accumulation order matches the reference.
inline void weight_grad_pair_k3(const double* x, const double* gy, double* gwk, const ConvDims& d, int oc, int ic,
                                double alpha) {
    const int H = d.H, W = d.W;
    const std::int64_t sx = d.x_stride(), sy = d.y_stride();
    double a00 = 0, a01 = 0, a02 = 0, a10 = 0, a11 = 0, a12 = 0, a20 = 0, a21 = 0, a22 = 0;
    for (int n = 0; n < d.N; ++n) {
        const double* xc = x + n * sx + static_cast<std::int64_t>(ic) * H * W;
        const double* gyc = gy + n * sy + static_cast<std::int64_t>(oc) * H * W;
        for (int oy = 0; oy < H; ++oy) {
            const double* gyrow = gyc + static_cast<std::int64_t>(oy) * W;
            const double* r0 = oy > 0 ? xc + static_cast<std::int64_t>(oy - 1) * W : nullptr;
            const double* r1 = xc + static_cast<std::int64_t>(oy) * W;
            const double* r2 = oy < H - 1 ? xc + static_cast<std::int64_t>(oy + 1) * W : nullptr;
            {  // ox = 0
                const double g = gyrow[0];
                if (r0) {
                    a01 += r0[0] * g;
                    a02 += r0[1] * g;
                }
                a11 += r1[0] * g;
                a12 += r1[1] * g;
                if (r2) {
                    a21 += r2[0] * g;
                    a22 += r2[1] * g;
                }
            }
            if (r0 && r2) {
                for (int ox = 1; ox < W - 1; ++ox) {
                    const double g = gyrow[ox];
                    a00 += r0[ox - 1] * g;
                    a01 += r0[ox] * g;
                    a02 += r0[ox + 1] * g;
                    a10 += r1[ox - 1] * g;
                    a11 += r1[ox] * g;
                    a12 += r1[ox + 1] * g;
                    a20 += r2[ox - 1] * g;
                    a21 += r2[ox] * g;
                    a22 += r2[ox + 1] * g;
                }
            } else {
                for (int ox = 1; ox < W - 1; ++ox) {
                    const double g = gyrow[ox];
                    if (r0) {
                        a00 += r0[ox - 1] * g;
                        a01 += r0[ox] * g;
                        a02 += r0[ox + 1] * g;
                    }
                    a10 += r1[ox - 1] * g;
                    a11 += r1[ox] * g;
                    a12 += r1[ox + 1] * g;
                    if (r2) {
                        a20 += r2[ox - 1] * g;
                        a21 += r2[ox] * g;
                        a22 += r2[ox + 1] * g;
                    }
                }
            }
            if (W > 1) {  // ox = W-1
                const int ox = W - 1;
                const double g = gyrow[ox];
                if (r0) {
                    a00 += r0[ox - 1] * g;
                    a01 += r0[ox] * g;
                }
                a10 += r1[ox - 1] * g;
                a11 += r1[ox] * g;
                if (r2) {
                    a20 += r2[ox - 1] * g;
                    a21 += r2[ox] * g;
                }
            }
        }
    }
    gwk[0] += alpha * a00;
    gwk[1] += alpha * a01;
    gwk[2] += alpha * a02;
    gwk[3] += alpha * a10;
    gwk[4] += alpha * a11;
    gwk[5] += alpha * a12;
    gwk[6] += alpha * a20;
    gwk[7] += alpha * a21;
    gwk[8] += alpha * a22;
}


// --- 3x3 / stride 2 / pad 1 fast paths (even H, W) ---------------------------

inline void forward_plane_k3s2(const double* xs, const double* w, double* yp, const ConvDims& d, int oc,
                               double alpha) {
    const int H = d.H, W = d.W, Ho = d.out_h(), Wo = d.out_w();
    for (int ic = 0; ic < d.Cin; ++ic) {
        const double* xc = xs + static_cast<std::int64_t>(ic) * H * W;
        const double* wk = w + ((static_cast<std::int64_t>(oc) * d.Cin + ic) * 3) * 3;
        const double w00 = alpha * wk[0], w01 = alpha * wk[1], w02 = alpha * wk[2];
        const double w10 = alpha * wk[3], w11 = alpha * wk[4], w12 = alpha * wk[5];
        const double w20 = alpha * wk[6], w21 = alpha * wk[7], w22 = alpha * wk[8];
        for (int oy = 0; oy < Ho; ++oy) {
            double* yrow = yp + static_cast<std::int64_t>(oy) * Wo;
            const int iy1 = 2 * oy;  // ky=1 row; ky=0 row is iy1-1, ky=2 row is iy1+1
            const double* r0 = iy1 > 0 ? xc + static_cast<std::int64_t>(iy1 - 1) * W : nullptr;
            const double* r1 = xc + static_cast<std::int64_t>(iy1) * W;
            const double* r2 = iy1 + 1 < H ? xc + static_cast<std::int64_t>(iy1 + 1) * W : nullptr;
            {  // ox = 0: kx=0 tap out of range
                double acc = yrow[0];
                if (r0) {
                    acc += w01 * r0[0];
                    acc += w02 * r0[1];
                }
                acc += w11 * r1[0];
                acc += w12 * r1[1];
                if (r2) {
                    acc += w21 * r2[0];
                    acc += w22 * r2[1];
                }
                yrow[0] = acc;
            }
            for (int ox = 1; ox < Wo; ++ox) {
                const int ix = 2 * ox - 1;
                double acc = yrow[ox];
                if (r0) {
                    acc += w00 * r0[ix];
                    acc += w01 * r0[ix + 1];
                    acc += w02 * r0[ix + 2];
                }
                acc += w10 * r1[ix];
                acc += w11 * r1[ix + 1];
                acc += w12 * r1[ix + 2];
                if (r2) {
                    acc += w20 * r2[ix];
                    acc += w21 * r2[ix + 1];
                    acc += w22 * r2[ix + 2];
                }
                yrow[ox] = acc;
            }
        }
    }
}

// Stride-2 input gradient. The (ky,kx) taps feeding gx[iy][ix] are fixed by
// the parities of iy+1 and ix+1, so the grid splits into four classes with
// 1/2/2/4 taps each; taps are applied in ascending (ky,kx) order, matching
// the reference.
inline void input_grad_plane_k3s2(const double* gys, const double* w, double* gxp, const ConvDims& d, int ic,
                                  double alpha) {
    const int H = d.H, W = d.W, Ho = d.out_h(), Wo = d.out_w();
    for (int oc = 0; oc < d.Cout; ++oc) {
        const double* gyc = gys + static_cast<std::int64_t>(oc) * Ho * Wo;
        const double* wk = w + ((static_cast<std::int64_t>(oc) * d.Cin + ic) * 3) * 3;
        const double w00 = alpha * wk[0], w01 = alpha * wk[1], w02 = alpha * wk[2];
        const double w10 = alpha * wk[3], w11 = alpha * wk[4], w12 = alpha * wk[5];
        const double w20 = alpha * wk[6], w21 = alpha * wk[7], w22 = alpha * wk[8];
        for (int iy = 0; iy < H; ++iy) {
            double* gxrow = gxp + static_cast<std::int64_t>(iy) * W;
            if ((iy + 1) % 2 == 0) {  // odd iy: ky in {0, 2}
                const int o0 = (iy + 1) / 2, o2 = (iy - 1) / 2;
                const double* g0 = o0 < Ho ? gyc + static_cast<std::int64_t>(o0) * Wo : nullptr;
                const double* g2 = gyc + static_cast<std::int64_t>(o2) * Wo;  // o2 >= 0 since iy >= 1
                for (int ix = 0; ix < W; ix += 2) {  // even ix: kx = 1, ox = ix/2
                    const int ox = ix / 2;
                    double acc = gxrow[ix];
                    if (g0) acc += w01 * g0[ox];
                    acc += w21 * g2[ox];
                    gxrow[ix] = acc;
                }
                for (int ix = 1; ix < W; ix += 2) {  // odd ix: kx in {0, 2}
                    const int ox0 = (ix + 1) / 2, ox2 = (ix - 1) / 2;
                    double acc = gxrow[ix];
                    if (g0) {
                        if (ox0 < Wo) acc += w00 * g0[ox0];
                        acc += w02 * g0[ox2];
                    }
                    if (ox0 < Wo) acc += w20 * g2[ox0];
                    acc += w22 * g2[ox2];
                    gxrow[ix] = acc;
                }
            } else {  // even iy: ky = 1, oy = iy/2 (always valid for even H)
                const double* g1 = gyc + static_cast<std::int64_t>(iy / 2) * Wo;
                for (int ix = 0; ix < W; ix += 2) {
                    gxrow[ix] += w11 * g1[ix / 2];
                }
                for (int ix = 1; ix < W; ix += 2) {
                    const int ox0 = (ix + 1) / 2, ox2 = (ix - 1) / 2;
                    double acc = gxrow[ix];
                    if (ox0 < Wo) acc += w10 * g1[ox0];
                    acc += w12 * g1[ox2];
                    gxrow[ix] = acc;
                }
            }
        }
    }
}

inline void weight_grad_pair_k3s2(const double* x, const double* gy, double* gwk, const ConvDims& d, int oc, int ic,
                                  double alpha) {
    const int H = d.H, W = d.W, Ho = d.out_h(), Wo = d.out_w();
    const std::int64_t sx = d.x_stride(), sy = d.y_stride();
    double a00 = 0, a01 = 0, a02 = 0, a10 = 0, a11 = 0, a12 = 0, a20 = 0, a21 = 0, a22 = 0;
    for (int n = 0; n < d.N; ++n) {
        const double* xc = x + n * sx + static_cast<std::int64_t>(ic) * H * W;
        const double* gyc = gy + n * sy + static_cast<std::int64_t>(oc) * Ho * Wo;
        for (int oy = 0; oy < Ho; ++oy) {
            const double* gyrow = gyc + static_cast<std::int64_t>(oy) * Wo;
            const int iy1 = 2 * oy;
            const double* r0 = iy1 > 0 ? xc + static_cast<std::int64_t>(iy1 - 1) * W : nullptr;
            const double* r1 = xc + static_cast<std::int64_t>(iy1) * W;
            const double* r2 = iy1 + 1 < H ? xc + static_cast<std::int64_t>(iy1 + 1) * W : nullptr;
            {  // ox = 0
                const double g = gyrow[0];
                if (r0) {
                    a01 += r0[0] * g;
                    a02 += r0[1] * g;
                }
                a11 += r1[0] * g;
                a12 += r1[1] * g;
                if (r2) {
                    a21 += r2[0] * g;
                    a22 += r2[1] * g;
                }
            }
            for (int ox = 1; ox < Wo; ++ox) {
                const int ix = 2 * ox - 1;
                const double g = gyrow[ox];
                if (r0) {
                    a00 += r0[ix] * g;
                    a01 += r0[ix + 1] * g;
                    a02 += r0[ix + 2] * g;
                }
                a10 += r1[ix] * g;
                a11 += r1[ix + 1] * g;
                a12 += r1[ix + 2] * g;
                if (r2) {
                    a20 += r2[ix] * g;
                    a21 += r2[ix + 1] * g;
                    a22 += r2[ix + 2] * g;
                }
            }
        }
    }
    gwk[0] += alpha * a00;
    gwk[1] += alpha * a01;
    gwk[2] += alpha * a02;
    gwk[3] += alpha * a10;
    gwk[4] += alpha * a11;
    gwk[5] += alpha * a12;
    gwk[6] += alpha * a20;
    gwk[7] += alpha * a21;
    gwk[8] += alpha * a22;
}

inline bool is_k3s2(const ConvDims& d) {
    return d.K == 3 && d.stride == 2 && d.pad == 1 && d.W >= 4 && d.H >= 4 && d.W % 2 == 0 && d.H % 2 == 0;
}

inline bool is_k3s1(const ConvDims& d) { return d.K == 3 && d.stride == 1 && d.pad == 1 && d.W >= 2 && d.H >= 2; }

inline void init_output(double* y, const double* bias, const ConvDims& d, int n, int oc, bool accumulate) {
    const int Ho = d.out_h(), Wo = d.out_w();
    double* yp = y + n * d.y_stride() + static_cast<std::int64_t>(oc) * Ho * Wo;
    if (!accumulate) {
        const double b = bias ? bias[oc] : 0.0;
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(Ho) * Wo; ++i) yp[i] = b;
    } else if (bias) {
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(Ho) * Wo; ++i) yp[i] += bias[oc];
    }
}

}  // namespace

void conv2d_forward(const double* x, const double* w, const double* bias, double* y, const ConvDims& d, double alpha,
                    bool accumulate) {
    const int Ho = d.out_h(), Wo = d.out_w();
    const bool fast1 = is_k3s1(d), fast2 = is_k3s2(d);
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < d.N; ++n) {
        for (int oc = 0; oc < d.Cout; ++oc) {
            init_output(y, bias, d, n, oc, accumulate);
            double* yp = y + n * d.y_stride() + static_cast<std::int64_t>(oc) * Ho * Wo;
            if (fast1)
                forward_plane_k3(x + n * d.x_stride(), w, yp, d, oc, alpha);
            else if (fast2)
                forward_plane_k3s2(x + n * d.x_stride(), w, yp, d, oc, alpha);
            else
                forward_plane(x + n * d.x_stride(), w, yp, d, oc, alpha);
        }
    }
}

void conv2d_forward_ref(const double* x, const double* w, const double* bias, double* y, const ConvDims& d,
                        double alpha, bool accumulate) {
    const int Ho = d.out_h(), Wo = d.out_w();
    for (int n = 0; n < d.N; ++n) {
        for (int oc = 0; oc < d.Cout; ++oc) {
            init_output(y, bias, d, n, oc, accumulate);
            forward_plane(x + n * d.x_stride(), w, y + n * d.y_stride() + static_cast<std::int64_t>(oc) * Ho * Wo, d,
                          oc, alpha);
        }
    }
}

void conv2d_input_grad(const double* gy, const double* w, double* gx, const ConvDims& d, double alpha,
                       bool accumulate) {
    const bool fast1 = is_k3s1(d), fast2 = is_k3s2(d);
#pragma omp parallel for collapse(2) schedule(static)
    for (int n = 0; n < d.N; ++n) {
        for (int ic = 0; ic < d.Cin; ++ic) {
            double* gxp = gx + n * d.x_stride() + static_cast<std::int64_t>(ic) * d.H * d.W;
            if (!accumulate) {
                for (std::int64_t i = 0; i < static_cast<std::int64_t>(d.H) * d.W; ++i) gxp[i] = 0.0;
            }
            if (fast1)
                input_grad_plane_k3(gy + n * d.y_stride(), w, gxp, d, ic, alpha);
            else if (fast2)
                input_grad_plane_k3s2(gy + n * d.y_stride(), w, gxp, d, ic, alpha);
            else
                input_grad_plane(gy + n * d.y_stride(), w, gxp, d, ic, alpha);
        }
    }
}

void conv2d_input_grad_ref(const double* gy, const double* w, double* gx, const ConvDims& d, double alpha,
                           bool accumulate) {
    for (int n = 0; n < d.N; ++n) {
        for (int ic = 0; ic < d.Cin; ++ic) {
            double* gxp = gx + n * d.x_stride() + static_cast<std::int64_t>(ic) * d.H * d.W;
            if (!accumulate) {
                for (std::int64_t i = 0; i < static_cast<std::int64_t>(d.H) * d.W; ++i) gxp[i] = 0.0;
            }
            input_grad_plane(gy + n * d.y_stride(), w, gxp, d, ic, alpha);
        }
    }
}

void conv2d_weight_grad(const double* x, const double* gy, double* gw, double* gb, const ConvDims& d, double alpha) {
    const int Ho = d.out_h(), Wo = d.out_w();
    const bool fast1 = is_k3s1(d), fast2 = is_k3s2(d);
#pragma omp parallel for collapse(2) schedule(static)
    for (int oc = 0; oc < d.Cout; ++oc) {
        for (int ic = 0; ic < d.Cin; ++ic) {
            double* gwk = gw + ((static_cast<std::int64_t>(oc) * d.Cin + ic) * d.K) * d.K;
            if (fast1)
                weight_grad_pair_k3(x, gy, gwk, d, oc, ic, alpha);
            else if (fast2)
                weight_grad_pair_k3s2(x, gy, gwk, d, oc, ic, alpha);
            else
                weight_grad_pair(x, gy, gwk, d, oc, ic, alpha);
        }
    }
    if (gb) {
#pragma omp parallel for schedule(static)
        for (int oc = 0; oc < d.Cout; ++oc) {
            double acc = 0.0;
            for (int n = 0; n < d.N; ++n) {
                const double* gyc = gy + n * d.y_stride() + static_cast<std::int64_t>(oc) * Ho * Wo;
                for (std::int64_t i = 0; i < static_cast<std::int64_t>(Ho) * Wo; ++i) acc += gyc[i];
            }
            gb[oc] += alpha * acc;
        }
    }
}

void conv2d_weight_grad_ref(const double* x, const double* gy, double* gw, double* gb, const ConvDims& d,
                            double alpha) {
    const int Ho = d.out_h(), Wo = d.out_w();
    for (int oc = 0; oc < d.Cout; ++oc) {
        for (int ic = 0; ic < d.Cin; ++ic) {
            weight_grad_pair(x, gy, gw + ((static_cast<std::int64_t>(oc) * d.Cin + ic) * d.K) * d.K, d, oc, ic, alpha);
        }
    }
    if (gb) {
        for (int oc = 0; oc < d.Cout; ++oc) {
            double acc = 0.0;
            for (int n = 0; n < d.N; ++n) {
                const double* gyc = gy + n * d.y_stride() + static_cast<std::int64_t>(oc) * Ho * Wo;
                for (std::int64_t i = 0; i < static_cast<std::int64_t>(Ho) * Wo; ++i) acc += gyc[i];
            }
            gb[oc] += alpha * acc;
        }
    }
}

}  // namespace treering::kernels
