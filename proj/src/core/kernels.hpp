#pragma once

#include <cstdint>

namespace treering::kernels {

// Direct 2D convolution (cross-correlation) kernels. These are the hot
// loops of the whole lab; everything neural sits on top of them.
//
// Layout: x is (N, Cin, H, W) row-major with an explicit per-sample stride
// sx (in doubles), so callers can run the kernel over a channel slice of a
// wider tensor without copying (the complex-conv layers use this). w is
// (Cout, Cin, K, K); y is (N, Cout, Ho, Wo) with per-sample stride sy.
//
// Each output element is accumulated serially in a fixed order and owned by
// exactly one thread, so results are bit-identical for any OMP_NUM_THREADS.
//
// The *_ref versions are the serial reference implementations used by the
// unit tests and the kernel benchmark.

struct ConvDims {
    int N = 1;
    int Cin = 0, H = 0, W = 0;
    int Cout = 0, K = 3;
    int stride = 1, pad = 1;
    std::int64_t sx = 0;  // defaults to Cin*H*W when 0
    std::int64_t sy = 0;  // defaults to Cout*Ho*Wo when 0

    int out_h() const { return (H + 2 * pad - K) / stride + 1; }
    int out_w() const { return (W + 2 * pad - K) / stride + 1; }
    std::int64_t x_stride() const { return sx ? sx : static_cast<std::int64_t>(Cin) * H * W; }
    std::int64_t y_stride() const { return sy ? sy : static_cast<std::int64_t>(Cout) * out_h() * out_w(); }
};

// y = alpha * conv(x, w) [+ bias] [+ y if accumulate]
void conv2d_forward(const double* x, const double* w, const double* bias, double* y, const ConvDims& d,
                    double alpha = 1.0, bool accumulate = false);
void conv2d_forward_ref(const double* x, const double* w, const double* bias, double* y, const ConvDims& d,
                        double alpha = 1.0, bool accumulate = false);

// gx = alpha * corr^T(gy, w) [+ gx if accumulate]
void conv2d_input_grad(const double* gy, const double* w, double* gx, const ConvDims& d, double alpha = 1.0,
                       bool accumulate = false);
void conv2d_input_grad_ref(const double* gy, const double* w, double* gx, const ConvDims& d, double alpha = 1.0,
                           bool accumulate = false);

// gw += alpha * dL/dw, gb += alpha * dL/db (gb may be null). Always accumulates.
void conv2d_weight_grad(const double* x, const double* gy, double* gw, double* gb, const ConvDims& d,
                        double alpha = 1.0);
void conv2d_weight_grad_ref(const double* x, const double* gy, double* gw, double* gb, const ConvDims& d,
                            double alpha = 1.0);

}  // namespace treering::kernels
