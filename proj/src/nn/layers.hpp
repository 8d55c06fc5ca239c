#pragma once

#include <string>
#include <vector>

#include "core/kernels.hpp"
#include "core/rng.hpp"
#include "core/tensor.hpp"

namespace treering::nn {

// Minimal layer set with explicit backward passes. Layers own their weights
// and gradient buffers; activations needed by backward live in per-call Ctx
// objects so the same layer can appear many times in an unrolled chain
// (the DDIM inversion attack backpropagates through T chained denoiser
// calls) without clobbering state.

struct Param {
    std::string name;
    Tensor w;
    Tensor g;

    void zero_grad() { g.fill(0.0); }
};

using ParamRefs = std::vector<Param*>;

// ---------------------------------------------------------------------------

class Conv2d {
public:
    Conv2d() = default;
    Conv2d(std::string name, int in_ch, int out_ch, int k, int stride, int pad, Rng& rng, bool zero_init = false);

    struct Ctx {
        Tensor x;
    };

    Tensor forward(const Tensor& x, Ctx* ctx) const;
    // Returns gx; accumulates weight gradients unless param_grads is false.
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool param_grads = true);

    void collect(ParamRefs& out) {
        out.push_back(&weight);
        out.push_back(&bias);
    }

    kernels::ConvDims dims(const Tensor& x) const;

    Param weight;  // (out,in,k,k)
    Param bias;    // (out)
    int in_ch = 0, out_ch = 0, k = 3, stride = 1, pad = 1;
};

class Linear {
public:
    Linear() = default;
    Linear(std::string name, int in_dim, int out_dim, Rng& rng, bool zero_init = false);

    struct Ctx {
        Tensor x;
    };

    Tensor forward(const Tensor& x, Ctx* ctx) const;  // x: (N,in) -> (N,out)
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool param_grads = true);

    void collect(ParamRefs& out) {
        out.push_back(&weight);
        out.push_back(&bias);
    }

    Param weight;  // (out,in)
    Param bias;    // (out)
    int in_dim = 0, out_dim = 0;
};

class GroupNorm {
public:
    GroupNorm() = default;
    GroupNorm(std::string name, int channels, int groups);

    struct Ctx {
        Tensor xhat;     // normalized input
        Tensor inv_std;  // (N, groups)
    };

    Tensor forward(const Tensor& x, Ctx* ctx) const;  // (N,C,H,W)
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool param_grads = true);

    void collect(ParamRefs& out) {
        out.push_back(&gamma);
        out.push_back(&beta);
    }

    Param gamma, beta;
    int channels = 0, groups = 1;
    double eps = 1e-5;
};

class Embedding {
public:
    Embedding() = default;
    Embedding(std::string name, int count, int dim, Rng& rng);

    struct Ctx {
        std::vector<int> ids;
    };

    Tensor forward(const std::vector<int>& ids, Ctx* ctx) const;  // (N,dim)
    void backward(const Tensor& gy, const Ctx& ctx);

    void collect(ParamRefs& out) { out.push_back(&table); }

    Param table;  // (count, dim)
    int count = 0, dim = 0;
};

// Stateless ops -------------------------------------------------------------

struct SiLU {
    struct Ctx {
        Tensor x;
    };
    static Tensor forward(const Tensor& x, Ctx* ctx);
    static Tensor backward(const Tensor& gy, const Ctx& ctx);
};

struct ReLU {
    struct Ctx {
        Tensor x;
    };
    static Tensor forward(const Tensor& x, Ctx* ctx);
    static Tensor backward(const Tensor& gy, const Ctx& ctx);
};

struct Upsample2x {  // nearest neighbour
    static Tensor forward(const Tensor& x);
    static Tensor backward(const Tensor& gy);
};

struct GlobalAvgPool {  // (N,C,H,W) -> (N,C)
    static Tensor forward(const Tensor& x);
    static Tensor backward(const Tensor& gy, int H, int W);
};

// Complex-valued layers ------------------------------------------------------
// Feature maps hold complex values as stacked planes: channels [0,C) are the
// real parts, [C,2C) the imaginary parts. Weights are complex (wr, wi) and
// the forward pass applies genuine complex multiplication, so gradients
// w.r.t. the input spectrum are the ones complex backprop would produce for
// a real-valued loss.

class ComplexConv2d {
public:
    ComplexConv2d() = default;
    ComplexConv2d(std::string name, int in_ch, int out_ch, int k, int stride, int pad, Rng& rng);

    struct Ctx {
        Tensor x;
    };

    Tensor forward(const Tensor& x, Ctx* ctx) const;  // (N,2*in,H,W) -> (N,2*out,Ho,Wo)
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool param_grads = true);

    void collect(ParamRefs& out) {
        out.push_back(&wr);
        out.push_back(&wi);
        out.push_back(&br);
        out.push_back(&bi);
    }

    Param wr, wi;  // (out,in,k,k) each
    Param br, bi;  // (out)
    int in_ch = 0, out_ch = 0, k = 3, stride = 1, pad = 1;
};

class ComplexLinear {
public:
    ComplexLinear() = default;
    ComplexLinear(std::string name, int in_dim, int out_dim, Rng& rng);

    struct Ctx {
        Tensor x;
    };

    Tensor forward(const Tensor& x, Ctx* ctx) const;  // (N,2*in) -> (N,2*out)
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool param_grads = true);

    void collect(ParamRefs& out) {
        out.push_back(&wr);
        out.push_back(&wi);
        out.push_back(&br);
        out.push_back(&bi);
    }

    Param wr, wi;  // (out,in)
    Param br, bi;  // (out)
    int in_dim = 0, out_dim = 0;
};

// CReLU: ReLU applied to real and imaginary planes independently.
using CReLU = ReLU;

// Losses ---------------------------------------------------------------------

struct LossGrad {
    double loss = 0.0;
    Tensor grad;
};

LossGrad mse_loss(const Tensor& pred, const Tensor& target);

// Mean cross-entropy over softmaxed logits (N,K); also exposes probabilities.
LossGrad softmax_ce(const Tensor& logits, const std::vector<int>& labels, Tensor* probs = nullptr);

// Sinusoidal features for a scalar position in [0,1]; dim must be even.
std::vector<double> sinusoidal_features(double s, int dim);

}  // namespace treering::nn
