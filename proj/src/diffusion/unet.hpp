#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diffusion/ddim.hpp"
#include "nn/adam.hpp"
#include "nn/layers.hpp"

namespace treering::diff {

// Conditional residual block: two 3x3 convs with group norms, a per-channel
// time-embedding bias after the first conv, and a 1x1 skip when widths differ.
class ResBlock {
public:
    ResBlock() = default;
    ResBlock(const std::string& name, int in_ch, int out_ch, int time_dim, Rng& rng);

    struct Ctx {
        nn::GroupNorm::Ctx gn1c;
        nn::SiLU::Ctx a1c;
        nn::Conv2d::Ctx c1c;
        nn::SiLU::Ctx tac;
        nn::Linear::Ctx tpc;
        nn::GroupNorm::Ctx gn2c;
        nn::SiLU::Ctx a2c;
        nn::Conv2d::Ctx c2c;
        nn::Conv2d::Ctx skipc;
        int H = 0, W = 0;
    };

    Tensor forward(const Tensor& x, const Tensor& temb, Ctx* ctx) const;
    // Returns gx; adds the block's time-embedding gradient into gtemb.
    Tensor backward(const Tensor& gy, const Ctx& ctx, Tensor& gtemb, bool param_grads);
    void collect(nn::ParamRefs& out);

    int in_ch = 0, out_ch = 0;

private:
    nn::GroupNorm gn1_, gn2_;
    nn::Conv2d conv1_, conv2_, skip_;
    nn::Linear temb_proj_;
    bool has_skip_ = false;
};

struct UNetConfig {
    int in_ch = 4;
    std::vector<int> channels = {16, 32};  // per resolution level, level 0 = input resolution
    int time_dim = 64;
    int num_classes = 8;  // excluding the reserved empty label
    std::uint64_t init_seed = 1;
};

// Small conditional U-Net eps-predictor. Head conv is zero-initialized so an
// untrained model predicts zero noise.
class UNet {
public:
    UNet() = default;
    explicit UNet(const UNetConfig& cfg);

    struct Ctx;

    // x: (N,C,H,W); s[n] in [0,1]; cond[n] in [0..num_classes] (0 = empty).
    Tensor forward(const Tensor& x, const std::vector<double>& s, const std::vector<int>& cond, Ctx* ctx) const;
    Tensor backward(const Tensor& gy, const Ctx& ctx, bool param_grads = true);

    void collect(nn::ParamRefs& out);
    const UNetConfig& config() const { return cfg_; }
    std::int64_t param_count();

    struct Ctx {
        nn::Linear::Ctx t1c;
        nn::SiLU::Ctx t1a;
        nn::Linear::Ctx t2c;
        nn::Embedding::Ctx cec;
        nn::Conv2d::Ctx stemc;
        std::vector<ResBlock::Ctx> encc;
        std::vector<nn::Conv2d::Ctx> downc;
        ResBlock::Ctx midc;
        std::vector<nn::Conv2d::Ctx> upc;
        std::vector<ResBlock::Ctx> decc;
        nn::GroupNorm::Ctx ognc;
        nn::SiLU::Ctx oac;
        nn::Conv2d::Ctx headc;
        std::vector<Tensor> skips;
    };

private:
    UNetConfig cfg_;
    nn::Linear t1_, t2_;
    nn::Embedding cemb_;
    nn::Conv2d stem_;
    std::vector<ResBlock> enc_;
    std::vector<nn::Conv2d> down_;
    ResBlock mid_;
    std::vector<nn::Conv2d> upconv_;
    std::vector<ResBlock> dec_;
    nn::GroupNorm out_gn_;
    nn::Conv2d head_;

    // mutable: forward() is logically const but layer forward signatures are
    // shared with backward-owning paths
    friend class UNetPredictor;
};

// NoisePredictor adapter binding a trained UNet to its schedule profile.
class UNetPredictor : public NoisePredictor {
public:
    UNetPredictor(const UNet& net, std::string sched_hash) : net_(net), hash_(std::move(sched_hash)) {}
    Tensor predict(const Tensor& x, double s, int cond) const override;
    std::string schedule_hash() const override { return hash_; }

private:
    const UNet& net_;
    std::string hash_;
};

Tensor concat_channels(const Tensor& a, const Tensor& b);
std::pair<Tensor, Tensor> split_channels(const Tensor& x, int ca);

}  // namespace treering::diff
