#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "codec/codec.hpp"
#include "nn/layers.hpp"

namespace treering::codec {

struct VaeArch {
    std::vector<int> pixel_shape = {3, 32, 32};
    int latent_channels = 4;
    int hidden = 24;
    int mid_depth = 1;  // extra 3x3 stages on the 16x16 trunk
    std::uint64_t init_seed = 1;
};

struct VaeTrainConfig {
    int epochs = 60;
    int batch_size = 32;
    double lr = 2e-3;
    double kl_weight = 1e-4;
    std::uint64_t seed = 1;
    std::string dataset_path;

    void validate() const;
};

// Small convolutional VAE with a single 2x downsampling stage; encoding is
// the posterior mean scaled so training latents have unit variance.
class ConvVae : public Codec {
public:
    ConvVae() = default;
    explicit ConvVae(const VaeArch& arch);

    // Codec interface (single sample, deterministic)
    SpatialTensor encode(const SpatialTensor& image) const override;
    SpatialTensor decode(const SpatialTensor& latent) const override;
    std::vector<int> latent_shape() const override;
    std::vector<int> pixel_shape() const override { return arch_.pixel_shape; }
    bool differentiable() const override { return true; }
    std::string identity_hash() const override;
    Tensor encode_input_grad(const SpatialTensor& image, const Tensor& grad_latent) const override;

    // Training surface (batched)
    struct EncCtx {
        nn::Conv2d::Ctx e1c, e2c, muc, lvc;
        std::vector<nn::Conv2d::Ctx> midc;
        nn::SiLU::Ctx a1, a2;
        std::vector<nn::SiLU::Ctx> amid;
    };
    struct DecCtx {
        nn::Conv2d::Ctx d1c, upc, outc;
        std::vector<nn::Conv2d::Ctx> midc;
        nn::SiLU::Ctx a1, aup;
        std::vector<nn::SiLU::Ctx> amid;
    };

    void encoder_forward(const Tensor& x, Tensor& mu, Tensor& logvar, EncCtx* ctx) const;
    // Returns grad wrt x given grads wrt (mu, logvar).
    Tensor encoder_backward(const Tensor& gmu, const Tensor& glv, const EncCtx& ctx, bool param_grads = true);
    Tensor decoder_forward(const Tensor& z, DecCtx* ctx) const;  // unclipped reconstruction
    Tensor decoder_backward(const Tensor& gx, const DecCtx& ctx, bool param_grads = true);

    void collect(nn::ParamRefs& out);
    const VaeArch& arch() const { return arch_; }

    double latent_scale = 1.0;
    nlohmann::json meta;

    void save(const std::string& path) const;
    static ConvVae load_file(const std::string& path);

private:
    VaeArch arch_;
    nn::Conv2d e1_, e2_, mu_, lv_;
    std::vector<nn::Conv2d> emid_;
    nn::Conv2d d1_, up_, out_;
    std::vector<nn::Conv2d> dmid_;
};

// Trains a ConvVae on pixel images (reconstruction MSE + small KL), then
// fixes the latent normalization from the training latents.
ConvVae train_codec(const std::vector<Tensor>& dataset, const VaeArch& arch, const VaeTrainConfig& cfg,
                    std::ostream* log = nullptr);

// Continues training an existing codec briefly (the "finetuned public VAE"
// ablation). The latent scale is kept from the base so latents stay
// comparable.
ConvVae finetune_codec(const ConvVae& base, const std::vector<Tensor>& dataset, const VaeTrainConfig& cfg,
                       std::ostream* log = nullptr);

}  // namespace treering::codec
