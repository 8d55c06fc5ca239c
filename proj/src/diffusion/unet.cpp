#include "diffusion/unet.hpp"

#include <stdexcept>

namespace treering::diff {

namespace {
int norm_groups(int channels) {
    for (int g : {8, 4, 2}) {
        if (channels % g == 0) return g;
    }
    return 1;
}
}  // namespace

ResBlock::ResBlock(const std::string& name, int in_ch_, int out_ch_, int time_dim, Rng& rng)
    : in_ch(in_ch_), out_ch(out_ch_) {
    gn1_ = nn::GroupNorm(name + ".gn1", in_ch, norm_groups(in_ch));
    conv1_ = nn::Conv2d(name + ".conv1", in_ch, out_ch, 3, 1, 1, rng);
    temb_proj_ = nn::Linear(name + ".temb", time_dim, out_ch, rng);
    gn2_ = nn::GroupNorm(name + ".gn2", out_ch, norm_groups(out_ch));
    conv2_ = nn::Conv2d(name + ".conv2", out_ch, out_ch, 3, 1, 1, rng);
    has_skip_ = in_ch != out_ch;
    if (has_skip_) skip_ = nn::Conv2d(name + ".skip", in_ch, out_ch, 1, 1, 0, rng);
}

Tensor ResBlock::forward(const Tensor& x, const Tensor& temb, Ctx* ctx) const {
    const int N = x.dim(0), H = x.dim(2), W = x.dim(3);
    Tensor h = gn1_.forward(x, ctx ? &ctx->gn1c : nullptr);
    h = nn::SiLU::forward(h, ctx ? &ctx->a1c : nullptr);
    h = conv1_.forward(h, ctx ? &ctx->c1c : nullptr);
    Tensor ta = nn::SiLU::forward(temb, ctx ? &ctx->tac : nullptr);
    Tensor tp = temb_proj_.forward(ta, ctx ? &ctx->tpc : nullptr);  // (N, out_ch)
    for (int n = 0; n < N; ++n)
        for (int c = 0; c < out_ch; ++c) {
            const double b = tp[static_cast<std::int64_t>(n) * out_ch + c];
            double* p = h.data() + (static_cast<std::int64_t>(n) * out_ch + c) * H * W;
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(H) * W; ++i) p[i] += b;
        }
    Tensor h2 = gn2_.forward(h, ctx ? &ctx->gn2c : nullptr);
    h2 = nn::SiLU::forward(h2, ctx ? &ctx->a2c : nullptr);
    h2 = conv2_.forward(h2, ctx ? &ctx->c2c : nullptr);
    Tensor s = has_skip_ ? skip_.forward(x, ctx ? &ctx->skipc : nullptr) : x;
    s.add(h2);
    if (ctx) {
        ctx->H = H;
        ctx->W = W;
    }
    return s;
}

Tensor ResBlock::backward(const Tensor& gy, const Ctx& ctx, Tensor& gtemb, bool param_grads) {
    const int N = gy.dim(0), H = ctx.H, W = ctx.W;
    // h2 branch
    Tensor gh = conv2_.backward(gy, ctx.c2c, param_grads);
    gh = nn::SiLU::backward(gh, ctx.a2c);
    gh = gn2_.backward(gh, ctx.gn2c, param_grads);
    // time bias: gradient is the spatial sum per (n, channel)
    Tensor gtp({N, out_ch});
    for (int n = 0; n < N; ++n)
        for (int c = 0; c < out_ch; ++c) {
            const double* p = gh.data() + (static_cast<std::int64_t>(n) * out_ch + c) * H * W;
            double acc = 0.0;
            for (std::int64_t i = 0; i < static_cast<std::int64_t>(H) * W; ++i) acc += p[i];
            gtp[static_cast<std::int64_t>(n) * out_ch + c] = acc;
        }
    Tensor gta = temb_proj_.backward(gtp, ctx.tpc, param_grads);
    gtemb.add(nn::SiLU::backward(gta, ctx.tac));
    // conv1 branch
    Tensor gx = conv1_.backward(gh, ctx.c1c, param_grads);
    gx = nn::SiLU::backward(gx, ctx.a1c);
    gx = gn1_.backward(gx, ctx.gn1c, param_grads);
    // skip branch
    if (has_skip_) {
        gx.add(skip_.backward(gy, ctx.skipc, param_grads));
    } else {
        gx.add(gy);
    }
    return gx;
}

void ResBlock::collect(nn::ParamRefs& out) {
    gn1_.collect(out);
    conv1_.collect(out);
    temb_proj_.collect(out);
    gn2_.collect(out);
    conv2_.collect(out);
    if (has_skip_) skip_.collect(out);
}

UNet::UNet(const UNetConfig& cfg) : cfg_(cfg) {
    if (cfg.channels.empty()) throw std::invalid_argument("UNet: need at least one level");
    Rng rng(cfg.init_seed);
    const int L = static_cast<int>(cfg.channels.size());
    t1_ = nn::Linear("time.l1", cfg.time_dim, cfg.time_dim, rng);
    t2_ = nn::Linear("time.l2", cfg.time_dim, cfg.time_dim, rng);
    cemb_ = nn::Embedding("cond", cfg.num_classes + 1, cfg.time_dim, rng);
    stem_ = nn::Conv2d("stem", cfg.in_ch, cfg.channels[0], 3, 1, 1, rng);
    for (int l = 0; l < L; ++l) {
        enc_.emplace_back("enc" + std::to_string(l), cfg.channels[static_cast<size_t>(l)],
                          cfg.channels[static_cast<size_t>(l)], cfg.time_dim, rng);
        if (l < L - 1)
            down_.emplace_back("down" + std::to_string(l), cfg.channels[static_cast<size_t>(l)],
                               cfg.channels[static_cast<size_t>(l) + 1], 3, 2, 1, rng);
    }
    mid_ = ResBlock("mid", cfg.channels.back(), cfg.channels.back(), cfg.time_dim, rng);
    for (int l = L - 2; l >= 0; --l) {
        upconv_.emplace_back("up" + std::to_string(l), cfg.channels[static_cast<size_t>(l) + 1],
                             cfg.channels[static_cast<size_t>(l)], 3, 1, 1, rng);
        dec_.emplace_back("dec" + std::to_string(l), 2 * cfg.channels[static_cast<size_t>(l)],
                          cfg.channels[static_cast<size_t>(l)], cfg.time_dim, rng);
    }
    out_gn_ = nn::GroupNorm("out.gn", cfg.channels[0], norm_groups(cfg.channels[0]));
    head_ = nn::Conv2d("head", cfg.channels[0], cfg.in_ch, 3, 1, 1, rng, /*zero_init=*/true);
}

Tensor UNet::forward(const Tensor& x, const std::vector<double>& s, const std::vector<int>& cond, Ctx* ctx) const {
    const int N = x.dim(0);
    if (static_cast<int>(s.size()) != N || static_cast<int>(cond.size()) != N)
        throw std::invalid_argument("UNet: s/cond batch mismatch");
    const int L = static_cast<int>(cfg_.channels.size());
    if (ctx) {
        ctx->encc.resize(static_cast<size_t>(L));
        ctx->downc.resize(static_cast<size_t>(L - 1));
        ctx->upc.resize(static_cast<size_t>(L - 1));
        ctx->decc.resize(static_cast<size_t>(L - 1));
        ctx->skips.clear();
    }
    // time + class embedding
    Tensor feats({N, cfg_.time_dim});
    for (int n = 0; n < N; ++n) {
        const std::vector<double> f = nn::sinusoidal_features(s[static_cast<size_t>(n)], cfg_.time_dim);
        for (int d = 0; d < cfg_.time_dim; ++d) feats[static_cast<std::int64_t>(n) * cfg_.time_dim + d] = f[static_cast<size_t>(d)];
    }
    Tensor temb = t1_.forward(feats, ctx ? &ctx->t1c : nullptr);
    temb = nn::SiLU::forward(temb, ctx ? &ctx->t1a : nullptr);
    temb = t2_.forward(temb, ctx ? &ctx->t2c : nullptr);
    temb.add(cemb_.forward(cond, ctx ? &ctx->cec : nullptr));

    Tensor h = stem_.forward(x, ctx ? &ctx->stemc : nullptr);
    std::vector<Tensor> skips;
    for (int l = 0; l < L; ++l) {
        h = enc_[static_cast<size_t>(l)].forward(h, temb, ctx ? &ctx->encc[static_cast<size_t>(l)] : nullptr);
        if (l < L - 1) {
            skips.push_back(h);
            h = down_[static_cast<size_t>(l)].forward(h, ctx ? &ctx->downc[static_cast<size_t>(l)] : nullptr);
        }
    }
    h = mid_.forward(h, temb, ctx ? &ctx->midc : nullptr);
    for (int i = 0; i < L - 1; ++i) {
        const int l = L - 2 - i;
        h = nn::Upsample2x::forward(h);
        h = upconv_[static_cast<size_t>(i)].forward(h, ctx ? &ctx->upc[static_cast<size_t>(i)] : nullptr);
        h = concat_channels(h, skips[static_cast<size_t>(l)]);
        h = dec_[static_cast<size_t>(i)].forward(h, temb, ctx ? &ctx->decc[static_cast<size_t>(i)] : nullptr);
    }
    if (ctx) ctx->skips = std::move(skips);
    h = out_gn_.forward(h, ctx ? &ctx->ognc : nullptr);
    h = nn::SiLU::forward(h, ctx ? &ctx->oac : nullptr);
    h = head_.forward(h, ctx ? &ctx->headc : nullptr);
    return h;
}

Tensor UNet::backward(const Tensor& gy, const Ctx& ctx, bool param_grads) {
    const int L = static_cast<int>(cfg_.channels.size());
    const int N = gy.dim(0);
    Tensor gtemb({N, cfg_.time_dim});

    Tensor g = head_.backward(gy, ctx.headc, param_grads);
    g = nn::SiLU::backward(g, ctx.oac);
    g = out_gn_.backward(g, ctx.ognc, param_grads);

    // decoder (reverse order of forward's up loop)
    std::vector<Tensor> gskips(static_cast<size_t>(L - 1));
    for (int i = L - 2; i >= 0; --i) {
        const int l = L - 2 - i;
        g = dec_[static_cast<size_t>(i)].backward(g, ctx.decc[static_cast<size_t>(i)], gtemb, param_grads);
        auto [gup, gskip] = split_channels(g, upconv_[static_cast<size_t>(i)].out_ch);
        gskips[static_cast<size_t>(l)] = std::move(gskip);
        g = upconv_[static_cast<size_t>(i)].backward(gup, ctx.upc[static_cast<size_t>(i)], param_grads);
        g = nn::Upsample2x::backward(g);
    }
    g = mid_.backward(g, ctx.midc, gtemb, param_grads);
    for (int l = L - 1; l >= 0; --l) {
        if (l < L - 1) {
            g = down_[static_cast<size_t>(l)].backward(g, ctx.downc[static_cast<size_t>(l)], param_grads);
            g.add(gskips[static_cast<size_t>(l)]);
        }
        g = enc_[static_cast<size_t>(l)].backward(g, ctx.encc[static_cast<size_t>(l)], gtemb, param_grads);
    }
    g = stem_.backward(g, ctx.stemc, param_grads);

    // time/cond path
    if (param_grads) cemb_.backward(gtemb, ctx.cec);
    Tensor gt = t2_.backward(gtemb, ctx.t2c, param_grads);
    gt = nn::SiLU::backward(gt, ctx.t1a);
    (void)t1_.backward(gt, ctx.t1c, param_grads);
    return g;
}

void UNet::collect(nn::ParamRefs& out) {
    t1_.collect(out);
    t2_.collect(out);
    cemb_.collect(out);
    stem_.collect(out);
    for (auto& b : enc_) b.collect(out);
    for (auto& c : down_) c.collect(out);
    mid_.collect(out);
    for (auto& c : upconv_) c.collect(out);
    for (auto& b : dec_) b.collect(out);
    out_gn_.collect(out);
    head_.collect(out);
}

std::int64_t UNet::param_count() {
    nn::ParamRefs ps;
    collect(ps);
    std::int64_t n = 0;
    for (auto* p : ps) n += p->w.size();
    return n;
}

Tensor UNetPredictor::predict(const Tensor& x, double s, int cond) const {
    Tensor xb = x.reshaped({1, x.dim(0), x.dim(1), x.dim(2)});
    Tensor y = net_.forward(xb, {s}, {cond}, nullptr);
    return y.reshaped({x.dim(0), x.dim(1), x.dim(2)});
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    const int N = a.dim(0), Ca = a.dim(1), Cb = b.dim(1), H = a.dim(2), W = a.dim(3);
    Tensor y({N, Ca + Cb, H, W});
    const std::int64_t plane = static_cast<std::int64_t>(H) * W;
    for (int n = 0; n < N; ++n) {
        std::copy(a.data() + n * Ca * plane, a.data() + (n + 1) * Ca * plane, y.data() + n * (Ca + Cb) * plane);
        std::copy(b.data() + n * Cb * plane, b.data() + (n + 1) * Cb * plane,
                  y.data() + (static_cast<std::int64_t>(n) * (Ca + Cb) + Ca) * plane);
    }
    return y;
}

std::pair<Tensor, Tensor> split_channels(const Tensor& x, int ca) {
    const int N = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    const int cb = C - ca;
    Tensor a({N, ca, H, W}), b({N, cb, H, W});
    const std::int64_t plane = static_cast<std::int64_t>(H) * W;
    for (int n = 0; n < N; ++n) {
        std::copy(x.data() + static_cast<std::int64_t>(n) * C * plane,
                  x.data() + static_cast<std::int64_t>(n) * C * plane + ca * plane, a.data() + n * ca * plane);
        std::copy(x.data() + static_cast<std::int64_t>(n) * C * plane + ca * plane,
                  x.data() + static_cast<std::int64_t>(n + 1) * C * plane, b.data() + n * cb * plane);
    }
    return {std::move(a), std::move(b)};
}

}  // namespace treering::diff
