#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "diffusion/schedule.hpp"
#include "diffusion/unet.hpp"

namespace treering::diff {

struct DiffusionTrainConfig {
    int epochs = 100;
    int batch_size = 32;
    double lr = 1e-3;
    std::uint64_t seed = 1;
    int train_T = 400;          // dense internal schedule; inference T strides over the same profile
    double cond_dropout = 0.1;  // labels swapped for the empty label during training so it is learned
    std::string dataset_path;

    void validate() const;
};

// Trained eps-predictor plus the metadata that pins it to a schedule profile
// and a training run.
struct DenoiserModel {
    UNet net;
    std::string sched_hash;
    ScheduleKind sched_kind = ScheduleKind::cosine;
    double alpha_end = 0.0;
    std::uint64_t seed = 0;
    double final_loss = 0.0;
    nlohmann::json meta;

    UNetPredictor predictor() const { return UNetPredictor(net, sched_hash); }

    void save(const std::string& path) const;
    static DenoiserModel load(const std::string& path);
};

// Standard eps-prediction objective: MSE between predicted and injected
// noise at uniformly sampled steps of the dense training schedule.
DenoiserModel train_denoiser(const std::vector<Tensor>& dataset, const std::vector<int>& conds,
                             const NoiseSchedule& sched, const UNetConfig& arch, const DiffusionTrainConfig& cfg,
                             std::ostream* log = nullptr);

// Mean eps-MSE over a held-out set at uniformly sampled steps (seeded).
double eval_eps_mse(const DenoiserModel& model, const std::vector<Tensor>& dataset, const std::vector<int>& conds,
                    const NoiseSchedule& sched, std::uint64_t seed);

}  // namespace treering::diff
