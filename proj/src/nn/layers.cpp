#include "nn/layers.hpp"

#include <cmath>
#include <stdexcept>

namespace treering::nn {

namespace {
double he_std(int fan_in) { return std::sqrt(2.0 / static_cast<double>(fan_in)); }
}  // namespace

// Conv2d ----------------------------------------------------------------------

Conv2d::Conv2d(std::string name, int in_ch_, int out_ch_, int k_, int stride_, int pad_, Rng& rng, bool zero_init)
    : in_ch(in_ch_), out_ch(out_ch_), k(k_), stride(stride_), pad(pad_) {
    weight.name = name + ".w";
    bias.name = name + ".b";
    weight.w = Tensor({out_ch, in_ch, k, k});
    bias.w = Tensor({out_ch});
    if (!zero_init) rng.fill_normal(weight.w, he_std(in_ch * k * k));
    weight.g = Tensor(weight.w.shape());
    bias.g = Tensor(bias.w.shape());
}

kernels::ConvDims Conv2d::dims(const Tensor& x) const {
    kernels::ConvDims d;
    d.N = x.dim(0);
    d.Cin = in_ch;
    d.H = x.dim(2);
    d.W = x.dim(3);
    d.Cout = out_ch;
    d.K = k;
    d.stride = stride;
    d.pad = pad;
    return d;
}

Tensor Conv2d::forward(const Tensor& x, Ctx* ctx) const {
    if (x.dim(1) != in_ch) throw std::invalid_argument("Conv2d: channel mismatch");
    const kernels::ConvDims d = dims(x);
    Tensor y({d.N, out_ch, d.out_h(), d.out_w()});
    kernels::conv2d_forward(x.data(), weight.w.data(), bias.w.data(), y.data(), d);
    if (ctx) ctx->x = x;
    return y;
}

Tensor Conv2d::backward(const Tensor& gy, const Ctx& ctx, bool param_grads) {
    const kernels::ConvDims d = dims(ctx.x);
    Tensor gx(ctx.x.shape());
    kernels::conv2d_input_grad(gy.data(), weight.w.data(), gx.data(), d);
    if (param_grads) kernels::conv2d_weight_grad(ctx.x.data(), gy.data(), weight.g.data(), bias.g.data(), d);
    return gx;
}

// Linear ----------------------------------------------------------------------

Linear::Linear(std::string name, int in_dim_, int out_dim_, Rng& rng, bool zero_init)
    : in_dim(in_dim_), out_dim(out_dim_) {
    weight.name = name + ".w";
    bias.name = name + ".b";
    weight.w = Tensor({out_dim, in_dim});
    bias.w = Tensor({out_dim});
    if (!zero_init) rng.fill_normal(weight.w, he_std(in_dim));
    weight.g = Tensor(weight.w.shape());
    bias.g = Tensor(bias.w.shape());
}

Tensor Linear::forward(const Tensor& x, Ctx* ctx) const {
    const int N = x.dim(0);
    Tensor y({N, out_dim});
    for (int n = 0; n < N; ++n) {
        const double* xp = x.data() + static_cast<std::int64_t>(n) * in_dim;
        for (int o = 0; o < out_dim; ++o) {
            const double* wp = weight.w.data() + static_cast<std::int64_t>(o) * in_dim;
            double acc = bias.w[o];
            for (int i = 0; i < in_dim; ++i) acc += wp[i] * xp[i];
            y[static_cast<std::int64_t>(n) * out_dim + o] = acc;
        }
    }
    if (ctx) ctx->x = x;
    return y;
}

Tensor Linear::backward(const Tensor& gy, const Ctx& ctx, bool param_grads) {
    const int N = ctx.x.dim(0);
    Tensor gx({N, in_dim});
    for (int n = 0; n < N; ++n) {
        const double* gyp = gy.data() + static_cast<std::int64_t>(n) * out_dim;
        const double* xp = ctx.x.data() + static_cast<std::int64_t>(n) * in_dim;
        double* gxp = gx.data() + static_cast<std::int64_t>(n) * in_dim;
        for (int o = 0; o < out_dim; ++o) {
            const double g = gyp[o];
            const double* wp = weight.w.data() + static_cast<std::int64_t>(o) * in_dim;
            for (int i = 0; i < in_dim; ++i) gxp[i] += g * wp[i];
            if (param_grads) {
                double* gwp = weight.g.data() + static_cast<std::int64_t>(o) * in_dim;
                for (int i = 0; i < in_dim; ++i) gwp[i] += g * xp[i];
                bias.g[o] += g;
            }
        }
    }
    return gx;
}

// GroupNorm --------------------------------------------------------------------

GroupNorm::GroupNorm(std::string name, int channels_, int groups_) : channels(channels_), groups(groups_) {
    if (channels % groups != 0) throw std::invalid_argument("GroupNorm: channels % groups != 0");
    gamma.name = name + ".gamma";
    beta.name = name + ".beta";
    gamma.w = Tensor::full({channels}, 1.0);
    beta.w = Tensor({channels});
    gamma.g = Tensor({channels});
    beta.g = Tensor({channels});
}

Tensor GroupNorm::forward(const Tensor& x, Ctx* ctx) const {
    const int N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    const int cpg = C / groups;
    const std::int64_t gsz = static_cast<std::int64_t>(cpg) * H * W;
    Tensor y(x.shape());
    Tensor xhat(x.shape());
    Tensor inv_std({N, groups});
    for (int n = 0; n < N; ++n) {
        for (int g = 0; g < groups; ++g) {
            const double* xp = x.data() + (static_cast<std::int64_t>(n) * C + static_cast<std::int64_t>(g) * cpg) * H * W;
            double mean = 0.0;
            for (std::int64_t i = 0; i < gsz; ++i) mean += xp[i];
            mean /= static_cast<double>(gsz);
            double var = 0.0;
            for (std::int64_t i = 0; i < gsz; ++i) {
                const double d = xp[i] - mean;
                var += d * d;
            }
            var /= static_cast<double>(gsz);
            const double istd = 1.0 / std::sqrt(var + eps);
            inv_std[static_cast<std::int64_t>(n) * groups + g] = istd;
            double* xh = xhat.data() + (static_cast<std::int64_t>(n) * C + static_cast<std::int64_t>(g) * cpg) * H * W;
            double* yp = y.data() + (static_cast<std::int64_t>(n) * C + static_cast<std::int64_t>(g) * cpg) * H * W;
            for (int c = 0; c < cpg; ++c) {
                const double gm = gamma.w[g * cpg + c], bt = beta.w[g * cpg + c];
                for (std::int64_t i = 0; i < static_cast<std::int64_t>(H) * W; ++i) {
                    const std::int64_t idx = static_cast<std::int64_t>(c) * H * W + i;
                    const double v = (xp[idx] - mean) * istd;
                    xh[idx] = v;
                    yp[idx] = gm * v + bt;
                }
            }
        }
    }
    if (ctx) {
        ctx->xhat = std::move(xhat);
        ctx->inv_std = std::move(inv_std);
    } else {
        // inference path needs no cache
    }
    return y;
}

Tensor GroupNorm::backward(const Tensor& gy, const Ctx& ctx, bool param_grads) {
    const int N = gy.dim(0), C = gy.dim(1), H = gy.dim(2), W = gy.dim(3);
    const int cpg = C / groups;
    const std::int64_t gsz = static_cast<std::int64_t>(cpg) * H * W;
    Tensor gx(gy.shape());
    for (int n = 0; n < N; ++n) {
        for (int g = 0; g < groups; ++g) {
            const std::int64_t base = (static_cast<std::int64_t>(n) * C + static_cast<std::int64_t>(g) * cpg) * H * W;
            const double* gyp = gy.data() + base;
            const double* xh = ctx.xhat.data() + base;
            double* gxp = gx.data() + base;
            const double istd = ctx.inv_std[static_cast<std::int64_t>(n) * groups + g];
            // gxhat = gy * gamma; need mean(gxhat) and mean(gxhat * xhat)
            double m1 = 0.0, m2 = 0.0;
            for (int c = 0; c < cpg; ++c) {
                const double gm = gamma.w[g * cpg + c];
                for (std::int64_t i = 0; i < static_cast<std::int64_t>(H) * W; ++i) {
                    const std::int64_t idx = static_cast<std::int64_t>(c) * H * W + i;
                    const double gxh = gyp[idx] * gm;
                    m1 += gxh;
                    m2 += gxh * xh[idx];
                }
            }
            m1 /= static_cast<double>(gsz);
            m2 /= static_cast<double>(gsz);
            for (int c = 0; c < cpg; ++c) {
                const double gm = gamma.w[g * cpg + c];
                for (std::int64_t i = 0; i < static_cast<std::int64_t>(H) * W; ++i) {
                    const std::int64_t idx = static_cast<std::int64_t>(c) * H * W + i;
                    const double gxh = gyp[idx] * gm;
                    gxp[idx] = istd * (gxh - m1 - xh[idx] * m2);
                }
            }
            if (param_grads) {
                for (int c = 0; c < cpg; ++c) {
                    double gg = 0.0, gb = 0.0;
                    for (std::int64_t i = 0; i < static_cast<std::int64_t>(H) * W; ++i) {
                        const std::int64_t idx = static_cast<std::int64_t>(c) * H * W + i;
                        gg += gyp[idx] * xh[idx];
                        gb += gyp[idx];
                    }
                    gamma.g[g * cpg + c] += gg;
                    beta.g[g * cpg + c] += gb;
                }
            }
        }
    }
    return gx;
}

// Embedding --------------------------------------------------------------------

Embedding::Embedding(std::string name, int count_, int dim_, Rng& rng) : count(count_), dim(dim_) {
    table.name = name + ".table";
    table.w = Tensor({count, dim});
    rng.fill_normal(table.w, 0.02);
    table.g = Tensor(table.w.shape());
}

Tensor Embedding::forward(const std::vector<int>& ids, Ctx* ctx) const {
    const int N = static_cast<int>(ids.size());
    Tensor y({N, dim});
    for (int n = 0; n < N; ++n) {
        const int id = ids[static_cast<size_t>(n)];
        if (id < 0 || id >= count) throw std::invalid_argument("Embedding: id out of range");
        for (int d = 0; d < dim; ++d)
            y[static_cast<std::int64_t>(n) * dim + d] = table.w[static_cast<std::int64_t>(id) * dim + d];
    }
    if (ctx) ctx->ids = ids;
    return y;
}

void Embedding::backward(const Tensor& gy, const Ctx& ctx) {
    const int N = static_cast<int>(ctx.ids.size());
    for (int n = 0; n < N; ++n) {
        const int id = ctx.ids[static_cast<size_t>(n)];
        for (int d = 0; d < dim; ++d)
            table.g[static_cast<std::int64_t>(id) * dim + d] += gy[static_cast<std::int64_t>(n) * dim + d];
    }
}

// Activations -------------------------------------------------------------------

Tensor SiLU::forward(const Tensor& x, Ctx* ctx) {
    Tensor y(x.shape());
    for (std::int64_t i = 0; i < x.size(); ++i) {
        const double s = 1.0 / (1.0 + std::exp(-x[i]));
        y[i] = x[i] * s;
    }
    if (ctx) ctx->x = x;
    return y;
}

Tensor SiLU::backward(const Tensor& gy, const Ctx& ctx) {
    Tensor gx(gy.shape());
    for (std::int64_t i = 0; i < gy.size(); ++i) {
        const double s = 1.0 / (1.0 + std::exp(-ctx.x[i]));
        gx[i] = gy[i] * s * (1.0 + ctx.x[i] * (1.0 - s));
    }
    return gx;
}

Tensor ReLU::forward(const Tensor& x, Ctx* ctx) {
    Tensor y(x.shape());
    for (std::int64_t i = 0; i < x.size(); ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
    if (ctx) ctx->x = x;
    return y;
}

Tensor ReLU::backward(const Tensor& gy, const Ctx& ctx) {
    Tensor gx(gy.shape());
    for (std::int64_t i = 0; i < gy.size(); ++i) gx[i] = ctx.x[i] > 0.0 ? gy[i] : 0.0;
    return gx;
}

Tensor Upsample2x::forward(const Tensor& x) {
    const int N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    Tensor y({N, C, H * 2, W * 2});
    for (int n = 0; n < N; ++n)
        for (int c = 0; c < C; ++c)
            for (int yy = 0; yy < H * 2; ++yy)
                for (int xx = 0; xx < W * 2; ++xx) y.at(n, c, yy, xx) = x.at(n, c, yy / 2, xx / 2);
    return y;
}

Tensor Upsample2x::backward(const Tensor& gy) {
    const int N = gy.dim(0), C = gy.dim(1), H = gy.dim(2) / 2, W = gy.dim(3) / 2;
    Tensor gx({N, C, H, W});
    for (int n = 0; n < N; ++n)
        for (int c = 0; c < C; ++c)
            for (int yy = 0; yy < H * 2; ++yy)
                for (int xx = 0; xx < W * 2; ++xx) gx.at(n, c, yy / 2, xx / 2) += gy.at(n, c, yy, xx);
    return gx;
}

Tensor GlobalAvgPool::forward(const Tensor& x) {
    const int N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    Tensor y({N, C});
    const double inv = 1.0 / (static_cast<double>(H) * W);
    for (int n = 0; n < N; ++n)
        for (int c = 0; c < C; ++c) {
            double acc = 0.0;
            const double* p = x.data() + (static_cast<std::int64_t>(n) * C + c) * H * W;
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(H) * W; ++i) acc += p[i];
            y[static_cast<std::int64_t>(n) * C + c] = acc * inv;
        }
    return y;
}

Tensor GlobalAvgPool::backward(const Tensor& gy, int H, int W) {
    const int N = gy.dim(0), C = gy.dim(1);
    Tensor gx({N, C, H, W});
    const double inv = 1.0 / (static_cast<double>(H) * W);
    for (int n = 0; n < N; ++n)
        for (int c = 0; c < C; ++c) {
            const double g = gy[static_cast<std::int64_t>(n) * C + c] * inv;
            double* p = gx.data() + (static_cast<std::int64_t>(n) * C + c) * H * W;
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(H) * W; ++i) p[i] = g;
        }
    return gx;
}

// Complex layers ------------------------------------------------------------------

ComplexConv2d::ComplexConv2d(std::string name, int in_ch_, int out_ch_, int k_, int stride_, int pad_, Rng& rng)
    : in_ch(in_ch_), out_ch(out_ch_), k(k_), stride(stride_), pad(pad_) {
    wr.name = name + ".wr";
    wi.name = name + ".wi";
    br.name = name + ".br";
    bi.name = name + ".bi";
    wr.w = Tensor({out_ch, in_ch, k, k});
    wi.w = Tensor({out_ch, in_ch, k, k});
    // He-style init split across real/imag parts
    const double s = std::sqrt(1.0 / static_cast<double>(in_ch * k * k));
    rng.fill_normal(wr.w, s);
    rng.fill_normal(wi.w, s);
    br.w = Tensor({out_ch});
    bi.w = Tensor({out_ch});
    wr.g = Tensor(wr.w.shape());
    wi.g = Tensor(wi.w.shape());
    br.g = Tensor(br.w.shape());
    bi.g = Tensor(bi.w.shape());
}

Tensor ComplexConv2d::forward(const Tensor& x, Ctx* ctx) const {
    if (x.dim(1) != 2 * in_ch) throw std::invalid_argument("ComplexConv2d: expected 2*in_ch planes");
    kernels::ConvDims d;
    d.N = x.dim(0);
    d.Cin = in_ch;
    d.H = x.dim(2);
    d.W = x.dim(3);
    d.Cout = out_ch;
    d.K = k;
    d.stride = stride;
    d.pad = pad;
    d.sx = static_cast<std::int64_t>(2 * in_ch) * d.H * d.W;
    const int Ho = d.out_h(), Wo = d.out_w();
    d.sy = static_cast<std::int64_t>(2 * out_ch) * Ho * Wo;
    Tensor y({d.N, 2 * out_ch, Ho, Wo});
    const std::int64_t xo = static_cast<std::int64_t>(in_ch) * d.H * d.W;
    const std::int64_t yo = static_cast<std::int64_t>(out_ch) * Ho * Wo;
    const double* xr = x.data();
    const double* xi = x.data() + xo;
    // yr = xr*wr - xi*wi + br ; yi = xr*wi + xi*wr + bi
    kernels::conv2d_forward(xr, wr.w.data(), br.w.data(), y.data(), d, 1.0, false);
    kernels::conv2d_forward(xi, wi.w.data(), nullptr, y.data(), d, -1.0, true);
    kernels::conv2d_forward(xr, wi.w.data(), bi.w.data(), y.data() + yo, d, 1.0, false);
    kernels::conv2d_forward(xi, wr.w.data(), nullptr, y.data() + yo, d, 1.0, true);
    if (ctx) ctx->x = x;
    return y;
}

Tensor ComplexConv2d::backward(const Tensor& gy, const Ctx& ctx, bool param_grads) {
    kernels::ConvDims d;
    d.N = ctx.x.dim(0);
    d.Cin = in_ch;
    d.H = ctx.x.dim(2);
    d.W = ctx.x.dim(3);
    d.Cout = out_ch;
    d.K = k;
    d.stride = stride;
    d.pad = pad;
    d.sx = static_cast<std::int64_t>(2 * in_ch) * d.H * d.W;
    const int Ho = d.out_h(), Wo = d.out_w();
    d.sy = static_cast<std::int64_t>(2 * out_ch) * Ho * Wo;
    const std::int64_t xo = static_cast<std::int64_t>(in_ch) * d.H * d.W;
    const std::int64_t yo = static_cast<std::int64_t>(out_ch) * Ho * Wo;
    Tensor gx(ctx.x.shape());
    const double* gyr = gy.data();
    const double* gyi = gy.data() + yo;
    // gxr = gyr (x) wr + gyi (x) wi ; gxi = -gyr (x) wi + gyi (x) wr
    kernels::conv2d_input_grad(gyr, wr.w.data(), gx.data(), d, 1.0, false);
    kernels::conv2d_input_grad(gyi, wi.w.data(), gx.data(), d, 1.0, true);
    kernels::conv2d_input_grad(gyr, wi.w.data(), gx.data() + xo, d, -1.0, false);
    kernels::conv2d_input_grad(gyi, wr.w.data(), gx.data() + xo, d, 1.0, true);
    if (param_grads) {
        const double* xr = ctx.x.data();
        const double* xi = ctx.x.data() + xo;
        kernels::conv2d_weight_grad(xr, gyr, wr.g.data(), br.g.data(), d, 1.0);
        kernels::conv2d_weight_grad(xi, gyi, wr.g.data(), nullptr, d, 1.0);
        kernels::conv2d_weight_grad(xr, gyi, wi.g.data(), bi.g.data(), d, 1.0);
        kernels::conv2d_weight_grad(xi, gyr, wi.g.data(), nullptr, d, -1.0);
    }
    return gx;
}

ComplexLinear::ComplexLinear(std::string name, int in_dim_, int out_dim_, Rng& rng)
    : in_dim(in_dim_), out_dim(out_dim_) {
    wr.name = name + ".wr";
    wi.name = name + ".wi";
    br.name = name + ".br";
    bi.name = name + ".bi";
    wr.w = Tensor({out_dim, in_dim});
    wi.w = Tensor({out_dim, in_dim});
    const double s = std::sqrt(1.0 / static_cast<double>(in_dim));
    rng.fill_normal(wr.w, s);
    rng.fill_normal(wi.w, s);
    br.w = Tensor({out_dim});
    bi.w = Tensor({out_dim});
    wr.g = Tensor(wr.w.shape());
    wi.g = Tensor(wi.w.shape());
    br.g = Tensor(br.w.shape());
    bi.g = Tensor(bi.w.shape());
}

Tensor ComplexLinear::forward(const Tensor& x, Ctx* ctx) const {
    const int N = x.dim(0);
    if (x.dim(1) != 2 * in_dim) throw std::invalid_argument("ComplexLinear: expected 2*in_dim features");
    Tensor y({N, 2 * out_dim});
    for (int n = 0; n < N; ++n) {
        const double* xr = x.data() + static_cast<std::int64_t>(n) * 2 * in_dim;
        const double* xi = xr + in_dim;
        double* yr = y.data() + static_cast<std::int64_t>(n) * 2 * out_dim;
        double* yi = yr + out_dim;
        for (int o = 0; o < out_dim; ++o) {
            const double* wrp = wr.w.data() + static_cast<std::int64_t>(o) * in_dim;
            const double* wip = wi.w.data() + static_cast<std::int64_t>(o) * in_dim;
            double ar = br.w[o], ai = bi.w[o];
            for (int i = 0; i < in_dim; ++i) {
                ar += xr[i] * wrp[i] - xi[i] * wip[i];
                ai += xr[i] * wip[i] + xi[i] * wrp[i];
            }
            yr[o] = ar;
            yi[o] = ai;
        }
    }
    if (ctx) ctx->x = x;
    return y;
}

Tensor ComplexLinear::backward(const Tensor& gy, const Ctx& ctx, bool param_grads) {
    const int N = ctx.x.dim(0);
    Tensor gx({N, 2 * in_dim});
    for (int n = 0; n < N; ++n) {
        const double* xr = ctx.x.data() + static_cast<std::int64_t>(n) * 2 * in_dim;
        const double* xi = xr + in_dim;
        const double* gyr = gy.data() + static_cast<std::int64_t>(n) * 2 * out_dim;
        const double* gyi = gyr + out_dim;
        double* gxr = gx.data() + static_cast<std::int64_t>(n) * 2 * in_dim;
        double* gxi = gxr + in_dim;
        for (int o = 0; o < out_dim; ++o) {
            const double* wrp = wr.w.data() + static_cast<std::int64_t>(o) * in_dim;
            const double* wip = wi.w.data() + static_cast<std::int64_t>(o) * in_dim;
            for (int i = 0; i < in_dim; ++i) {
                gxr[i] += gyr[o] * wrp[i] + gyi[o] * wip[i];
                gxi[i] += -gyr[o] * wip[i] + gyi[o] * wrp[i];
            }
            if (param_grads) {
                double* gwr = wr.g.data() + static_cast<std::int64_t>(o) * in_dim;
                double* gwi = wi.g.data() + static_cast<std::int64_t>(o) * in_dim;
                for (int i = 0; i < in_dim; ++i) {
                    gwr[i] += gyr[o] * xr[i] + gyi[o] * xi[i];
                    gwi[i] += -gyr[o] * xi[i] + gyi[o] * xr[i];
                }
                br.g[o] += gyr[o];
                bi.g[o] += gyi[o];
            }
        }
    }
    return gx;
}

// Losses ------------------------------------------------------------------------

LossGrad mse_loss(const Tensor& pred, const Tensor& target) {
    if (!pred.same_shape(target)) throw std::invalid_argument("mse_loss: shape mismatch");
    LossGrad lg;
    lg.grad = Tensor(pred.shape());
    const double inv = pred.size() > 0 ? 1.0 / static_cast<double>(pred.size()) : 0.0;
    double acc = 0.0;
    for (std::int64_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        acc += d * d;
        lg.grad[i] = 2.0 * d * inv;
    }
    lg.loss = acc * inv;
    return lg;
}

LossGrad softmax_ce(const Tensor& logits, const std::vector<int>& labels, Tensor* probs) {
    const int N = logits.dim(0), K = logits.dim(1);
    if (static_cast<int>(labels.size()) != N) throw std::invalid_argument("softmax_ce: label count mismatch");
    LossGrad lg;
    lg.grad = Tensor(logits.shape());
    Tensor p(logits.shape());
    double acc = 0.0;
    for (int n = 0; n < N; ++n) {
        const double* lp = logits.data() + static_cast<std::int64_t>(n) * K;
        double m = lp[0];
        for (int k = 1; k < K; ++k) m = std::max(m, lp[k]);
        double z = 0.0;
        for (int k = 0; k < K; ++k) z += std::exp(lp[k] - m);
        const int y = labels[static_cast<size_t>(n)];
        for (int k = 0; k < K; ++k) {
            const double pk = std::exp(lp[k] - m) / z;
            p[static_cast<std::int64_t>(n) * K + k] = pk;
            lg.grad[static_cast<std::int64_t>(n) * K + k] = (pk - (k == y ? 1.0 : 0.0)) / N;
        }
        acc += -(lp[y] - m - std::log(z));
    }
    lg.loss = acc / N;
    if (probs) *probs = std::move(p);
    return lg;
}

std::vector<double> sinusoidal_features(double s, int dim) {
    std::vector<double> f(static_cast<size_t>(dim));
    const int half = dim / 2;
    const double pos = s * 1000.0;
    for (int i = 0; i < half; ++i) {
        const double freq = std::exp(-std::log(10000.0) * static_cast<double>(i) / std::max(1, half - 1));
        f[static_cast<size_t>(i)] = std::sin(pos * freq);
        f[static_cast<size_t>(half + i)] = std::cos(pos * freq);
    }
    return f;
}

}  // namespace treering::nn
