#include "codec/vae.hpp"

#include <cmath>
#include <stdexcept>

#include "core/hash.hpp"
#include "core/rng.hpp"
#include "nn/adam.hpp"
#include "nn/checkpoint.hpp"

namespace treering::codec {

void VaeTrainConfig::validate() const {
    if (epochs <= 0 || batch_size <= 0 || lr <= 0.0 || kl_weight < 0.0)
        throw std::invalid_argument("VaeTrainConfig: fields must be positive");
}

ConvVae::ConvVae(const VaeArch& arch) : arch_(arch) {
    if (arch.pixel_shape.size() != 3) throw std::invalid_argument("ConvVae: pixel shape must be CHW");
    if (arch.pixel_shape[1] % 2 != 0 || arch.pixel_shape[2] % 2 != 0)
        throw std::invalid_argument("ConvVae: pixel dims must be even");
    Rng rng(arch.init_seed);
    const int pc = arch.pixel_shape[0], h = arch.hidden, lc = arch.latent_channels;
    e1_ = nn::Conv2d("enc.e1", pc, h, 3, 1, 1, rng);
    e2_ = nn::Conv2d("enc.e2", h, h, 3, 2, 1, rng);
    for (int i = 0; i < arch.mid_depth; ++i) emid_.emplace_back("enc.mid" + std::to_string(i), h, h, 3, 1, 1, rng);
    mu_ = nn::Conv2d("enc.mu", h, lc, 3, 1, 1, rng);
    lv_ = nn::Conv2d("enc.lv", h, lc, 3, 1, 1, rng, /*zero_init=*/true);
    d1_ = nn::Conv2d("dec.d1", lc, h, 3, 1, 1, rng);
    for (int i = 0; i < arch.mid_depth; ++i) dmid_.emplace_back("dec.mid" + std::to_string(i), h, h, 3, 1, 1, rng);
    up_ = nn::Conv2d("dec.up", h, h, 3, 1, 1, rng);
    out_ = nn::Conv2d("dec.out", h, pc, 3, 1, 1, rng);
}

std::vector<int> ConvVae::latent_shape() const {
    return {arch_.latent_channels, arch_.pixel_shape[1] / 2, arch_.pixel_shape[2] / 2};
}

void ConvVae::encoder_forward(const Tensor& x, Tensor& mu, Tensor& logvar, EncCtx* ctx) const {
    if (ctx) {
        ctx->midc.resize(emid_.size());
        ctx->amid.resize(emid_.size());
    }
    Tensor h = e1_.forward(x, ctx ? &ctx->e1c : nullptr);
    h = nn::SiLU::forward(h, ctx ? &ctx->a1 : nullptr);
    h = e2_.forward(h, ctx ? &ctx->e2c : nullptr);
    h = nn::SiLU::forward(h, ctx ? &ctx->a2 : nullptr);
    for (size_t i = 0; i < emid_.size(); ++i) {
        h = emid_[i].forward(h, ctx ? &ctx->midc[i] : nullptr);
        h = nn::SiLU::forward(h, ctx ? &ctx->amid[i] : nullptr);
    }
    mu = mu_.forward(h, ctx ? &ctx->muc : nullptr);
    logvar = lv_.forward(h, ctx ? &ctx->lvc : nullptr);
}

Tensor ConvVae::encoder_backward(const Tensor& gmu, const Tensor& glv, const EncCtx& ctx, bool param_grads) {
    Tensor gh = mu_.backward(gmu, ctx.muc, param_grads);
    gh.add(lv_.backward(glv, ctx.lvc, param_grads));
    for (int i = static_cast<int>(emid_.size()) - 1; i >= 0; --i) {
        gh = nn::SiLU::backward(gh, ctx.amid[static_cast<size_t>(i)]);
        gh = emid_[static_cast<size_t>(i)].backward(gh, ctx.midc[static_cast<size_t>(i)], param_grads);
    }
    gh = nn::SiLU::backward(gh, ctx.a2);
    gh = e2_.backward(gh, ctx.e2c, param_grads);
    gh = nn::SiLU::backward(gh, ctx.a1);
    return e1_.backward(gh, ctx.e1c, param_grads);
}

Tensor ConvVae::decoder_forward(const Tensor& z, DecCtx* ctx) const {
    if (ctx) {
        ctx->midc.resize(dmid_.size());
        ctx->amid.resize(dmid_.size());
    }
    Tensor h = d1_.forward(z, ctx ? &ctx->d1c : nullptr);
    h = nn::SiLU::forward(h, ctx ? &ctx->a1 : nullptr);
    for (size_t i = 0; i < dmid_.size(); ++i) {
        h = dmid_[i].forward(h, ctx ? &ctx->midc[i] : nullptr);
        h = nn::SiLU::forward(h, ctx ? &ctx->amid[i] : nullptr);
    }
    h = nn::Upsample2x::forward(h);
    h = up_.forward(h, ctx ? &ctx->upc : nullptr);
    h = nn::SiLU::forward(h, ctx ? &ctx->aup : nullptr);
    return out_.forward(h, ctx ? &ctx->outc : nullptr);
}

Tensor ConvVae::decoder_backward(const Tensor& gx, const DecCtx& ctx, bool param_grads) {
    Tensor gh = out_.backward(gx, ctx.outc, param_grads);
    gh = nn::SiLU::backward(gh, ctx.aup);
    gh = up_.backward(gh, ctx.upc, param_grads);
    gh = nn::Upsample2x::backward(gh);
    for (int i = static_cast<int>(dmid_.size()) - 1; i >= 0; --i) {
        gh = nn::SiLU::backward(gh, ctx.amid[static_cast<size_t>(i)]);
        gh = dmid_[static_cast<size_t>(i)].backward(gh, ctx.midc[static_cast<size_t>(i)], param_grads);
    }
    gh = nn::SiLU::backward(gh, ctx.a1);
    return d1_.backward(gh, ctx.d1c, param_grads);
}

SpatialTensor ConvVae::encode(const SpatialTensor& image) const {
    if (image.domain != Domain::pixel) throw std::invalid_argument("ConvVae::encode: expected pixel domain");
    if (image.data.shape() != arch_.pixel_shape) throw std::invalid_argument("ConvVae::encode: shape mismatch");
    const auto& s = image.data.shape();
    Tensor xb = image.data.reshaped({1, s[0], s[1], s[2]});
    Tensor mu, lv;
    encoder_forward(xb, mu, lv, nullptr);
    mu.scale(latent_scale);
    return make_latent(mu.reshaped(latent_shape()));
}

SpatialTensor ConvVae::decode(const SpatialTensor& latent) const {
    if (latent.data.shape() != latent_shape()) throw std::invalid_argument("ConvVae::decode: shape mismatch");
    const auto ls = latent_shape();
    Tensor zb = latent.data.reshaped({1, ls[0], ls[1], ls[2]});
    zb.scale(1.0 / latent_scale);
    Tensor x = decoder_forward(zb, nullptr);
    x.clamp(-1.0, 1.0);
    return make_pixel(x.reshaped(arch_.pixel_shape));
}

Tensor ConvVae::encode_input_grad(const SpatialTensor& image, const Tensor& grad_latent) const {
    const auto& s = image.data.shape();
    Tensor xb = image.data.reshaped({1, s[0], s[1], s[2]});
    EncCtx ctx;
    Tensor mu, lv;
    encoder_forward(xb, mu, lv, &ctx);
    Tensor gmu = grad_latent.reshaped(mu.shape());
    gmu.scale(latent_scale);
    Tensor glv(lv.shape());
    Tensor gx = const_cast<ConvVae*>(this)->encoder_backward(gmu, glv, ctx, /*param_grads=*/false);
    return gx.reshaped(image.data.shape());
}

void ConvVae::collect(nn::ParamRefs& out) {
    e1_.collect(out);
    e2_.collect(out);
    for (auto& c : emid_) c.collect(out);
    mu_.collect(out);
    lv_.collect(out);
    d1_.collect(out);
    for (auto& c : dmid_) c.collect(out);
    up_.collect(out);
    out_.collect(out);
}

std::string ConvVae::identity_hash() const {
    nn::ParamRefs ps;
    const_cast<ConvVae*>(this)->collect(ps);
    std::uint64_t h = fnv1a64(meta.dump());
    for (const auto* p : ps) h = fnv1a64(p->w.data(), static_cast<size_t>(p->w.size()) * sizeof(double), h);
    h = fnv1a64(&latent_scale, sizeof(latent_scale), h);
    return hash_hex(h);
}

void ConvVae::save(const std::string& path) const {
    nn::Checkpoint ck;
    ck.meta = meta;
    ck.meta["latent_scale"] = latent_scale;
    ck.meta["arch"] = {{"pixel_shape", arch_.pixel_shape},
                       {"latent_channels", arch_.latent_channels},
                       {"hidden", arch_.hidden},
                       {"mid_depth", arch_.mid_depth},
                       {"init_seed", arch_.init_seed}};
    nn::ParamRefs ps;
    const_cast<ConvVae*>(this)->collect(ps);
    ck.add_params(ps);
    ck.save(path);
}

ConvVae ConvVae::load_file(const std::string& path) {
    const nn::Checkpoint ck = nn::Checkpoint::load(path);
    if (ck.meta.value("kind", "") != "codec") throw std::runtime_error("not a codec checkpoint: " + path);
    VaeArch a;
    a.pixel_shape = ck.meta["arch"]["pixel_shape"].get<std::vector<int>>();
    a.latent_channels = ck.meta["arch"]["latent_channels"].get<int>();
    a.hidden = ck.meta["arch"]["hidden"].get<int>();
    a.mid_depth = ck.meta["arch"]["mid_depth"].get<int>();
    a.init_seed = ck.meta["arch"]["init_seed"].get<std::uint64_t>();
    ConvVae v(a);
    nn::ParamRefs ps;
    v.collect(ps);
    ck.restore_params(ps);
    v.meta = ck.meta;
    v.latent_scale = ck.meta["latent_scale"].get<double>();
    return v;
}

namespace {

Tensor batch_images(const std::vector<Tensor>& data, const std::vector<int>& idx) {
    const Tensor& f = data[static_cast<size_t>(idx[0])];
    Tensor b({static_cast<int>(idx.size()), f.dim(0), f.dim(1), f.dim(2)});
    for (size_t n = 0; n < idx.size(); ++n)
        std::copy(data[static_cast<size_t>(idx[n])].data(), data[static_cast<size_t>(idx[n])].data() + f.size(),
                  b.data() + static_cast<std::int64_t>(n) * f.size());
    return b;
}

double run_vae_training(ConvVae& vae, const std::vector<Tensor>& dataset, const VaeTrainConfig& cfg,
                        std::ostream* log, const char* tag) {
    cfg.validate();
    if (dataset.empty()) throw std::invalid_argument("train_codec: empty dataset");
    for (const Tensor& t : dataset)
        if (t.shape() != vae.arch().pixel_shape) throw std::invalid_argument("train_codec: image shape mismatch");

    nn::ParamRefs params;
    vae.collect(params);
    nn::Adam::Config ac;
    ac.lr = cfg.lr;
    nn::Adam opt(params, ac);
    Rng rng(Rng::derive(cfg.seed, tag));
    const int n = static_cast<int>(dataset.size());
    double last = 0.0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const std::vector<int> perm = rng.permutation(n);
        double acc = 0.0;
        int batches = 0;
        for (int start = 0; start < n; start += cfg.batch_size) {
            const int bsz = std::min(cfg.batch_size, n - start);
            std::vector<int> idx(perm.begin() + start, perm.begin() + start + bsz);
            Tensor x = batch_images(dataset, idx);
            ConvVae::EncCtx ec;
            Tensor mu, lv;
            vae.encoder_forward(x, mu, lv, &ec);
            Tensor epsz(mu.shape());
            rng.fill_normal(epsz);
            Tensor z(mu.shape());
            for (std::int64_t i = 0; i < z.size(); ++i) z[i] = mu[i] + std::exp(0.5 * lv[i]) * epsz[i];
            ConvVae::DecCtx dc;
            Tensor xhat = vae.decoder_forward(z, &dc);
            nn::LossGrad rec = nn::mse_loss(xhat, x);
            // KL(q || N(0,I)) averaged per latent element
            const double kdiv = 1.0 / static_cast<double>(mu.size());
            double kl = 0.0;
            for (std::int64_t i = 0; i < mu.size(); ++i) kl += -0.5 * (1.0 + lv[i] - mu[i] * mu[i] - std::exp(lv[i]));
            kl *= kdiv;
            opt.zero_grad();
            Tensor gz = vae.decoder_backward(rec.grad, dc);
            Tensor gmu = gz;
            Tensor glv(lv.shape());
            for (std::int64_t i = 0; i < lv.size(); ++i) {
                glv[i] = gz[i] * epsz[i] * 0.5 * std::exp(0.5 * lv[i]);
                gmu[i] += cfg.kl_weight * kdiv * mu[i];
                glv[i] += cfg.kl_weight * kdiv * 0.5 * (std::exp(lv[i]) - 1.0);
            }
            vae.encoder_backward(gmu, glv, ec);
            opt.step();
            acc += rec.loss + cfg.kl_weight * kl;
            ++batches;
        }
        last = acc / std::max(1, batches);
        if (log && (epoch % 10 == 0 || epoch == cfg.epochs - 1)) (*log) << "vae epoch " << epoch << " loss " << last << "\n";
    }
    return last;
}

}  // namespace

ConvVae train_codec(const std::vector<Tensor>& dataset, const VaeArch& arch, const VaeTrainConfig& cfg,
                    std::ostream* log) {
    VaeArch a = arch;
    a.init_seed = Rng::derive(cfg.seed, "vae-init");
    ConvVae vae(a);
    const double final_loss = run_vae_training(vae, dataset, cfg, log, "vae-train");

    // Normalize latents to unit std so diffusion sees N(0,1)-scale inputs.
    double sum = 0.0, sum2 = 0.0;
    std::int64_t count = 0;
    for (const Tensor& img : dataset) {
        Tensor xb = img.reshaped({1, img.dim(0), img.dim(1), img.dim(2)});
        Tensor mu, lv;
        vae.encoder_forward(xb, mu, lv, nullptr);
        for (std::int64_t i = 0; i < mu.size(); ++i) {
            sum += mu[i];
            sum2 += mu[i] * mu[i];
        }
        count += mu.size();
    }
    const double mean = sum / static_cast<double>(count);
    const double var = sum2 / static_cast<double>(count) - mean * mean;
    vae.latent_scale = var > 1e-12 ? 1.0 / std::sqrt(var) : 1.0;

    double recon = 0.0;
    for (const Tensor& img : dataset) {
        const SpatialTensor rt = vae.decode(vae.encode(make_pixel(img)));
        recon += mse(rt.data, img);
    }
    recon /= static_cast<double>(dataset.size());

    vae.meta = {{"kind", "codec"},        {"variant", "same"},
                {"seed", cfg.seed},       {"kl_weight", cfg.kl_weight},
                {"epochs", cfg.epochs},   {"final_loss", final_loss},
                {"train_recon_mse", recon}, {"dataset_path", cfg.dataset_path}};
    return vae;
}

ConvVae finetune_codec(const ConvVae& base, const std::vector<Tensor>& dataset, const VaeTrainConfig& cfg,
                       std::ostream* log) {
    ConvVae vae = base;
    const double final_loss = run_vae_training(vae, dataset, cfg, log, "vae-finetune");
    vae.meta["variant"] = "finetuned";
    vae.meta["finetune_epochs"] = cfg.epochs;
    vae.meta["finetune_seed"] = cfg.seed;
    vae.meta["final_loss"] = final_loss;
    return vae;
}

}  // namespace treering::codec
