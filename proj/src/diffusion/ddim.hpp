#pragma once

#include <memory>
#include <string>

#include "core/tensor.hpp"
#include "diffusion/schedule.hpp"

namespace treering::diff {

// Reserved empty conditioning label. Detection-side inversion always runs
// with this label, matching a detector that never sees the original prompt.
constexpr int kEmptyCond = 0;

// eps-predictor interface. Implementations must be pure: identical
// (input, s, cond) yields bit-identical output.
class NoisePredictor {
public:
    virtual ~NoisePredictor() = default;
    // x is CHW; s = t/T in [0,1].
    virtual Tensor predict(const Tensor& x, double s, int cond) const = 0;
    // Profile hash of the schedule the predictor was trained against.
    virtual std::string schedule_hash() const = 0;
};

// Test predictor that replays a fixed eps regardless of input; turns the
// sampler and the inverter into exact mutual inverses.
class OracleDenoiser : public NoisePredictor {
public:
    OracleDenoiser(Tensor eps, std::string sched_hash) : eps_(std::move(eps)), hash_(std::move(sched_hash)) {}
    Tensor predict(const Tensor&, double, int) const override { return eps_; }
    std::string schedule_hash() const override { return hash_; }

private:
    Tensor eps_;
    std::string hash_;
};

class ZeroDenoiser : public NoisePredictor {
public:
    explicit ZeroDenoiser(std::string sched_hash) : hash_(std::move(sched_hash)) {}
    Tensor predict(const Tensor& x, double, int) const override { return Tensor(x.shape()); }
    std::string schedule_hash() const override { return hash_; }

private:
    std::string hash_;
};

// x_t = sqrt(a_t) x0 + sqrt(1 - a_t) eps. eps is injected by the caller so
// every sampling decision is reproducible.
SpatialTensor forward_noise(const SpatialTensor& x0, int t, const Tensor& eps, const NoiseSchedule& sched);

// x0 estimate from (x_t, eps): (x_t - sqrt(1-a_t) eps) / sqrt(a_t). t >= 1.
SpatialTensor estimate_x0(const SpatialTensor& xt, int t, const Tensor& eps_pred, const NoiseSchedule& sched);

// One deterministic denoising step t -> t-1.
SpatialTensor ddim_step(const SpatialTensor& xt, int t, const NoisePredictor& model, int cond,
                        const NoiseSchedule& sched);

// Full sampler: applies ddim_step for t = T..1.
SpatialTensor ddim_sample(const SpatialTensor& xT, const NoisePredictor& model, int cond, const NoiseSchedule& sched);

// Inversion: x_{t+1} = sqrt(a_{t+1}) x0_est(t) + sqrt(1-a_{t+1}) eps(x_t)
// for t = 0..T-1. cond defaults to the empty label; detection never
// overrides it (the override exists for matched-condition diagnostics).
SpatialTensor ddim_invert(const SpatialTensor& x0, const NoisePredictor& model, const NoiseSchedule& sched,
                          int cond = kEmptyCond);

}  // namespace treering::diff
