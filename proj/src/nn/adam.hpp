#pragma once

#include <cmath>
#include <vector>

#include "nn/layers.hpp"

namespace treering::nn {

// Adam with bias correction. Optimizer state is per-instance so concurrent
// training jobs and per-image attack loops never share moments.
class Adam {
public:
    struct Config {
        double lr = 1e-3;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double eps = 1e-8;
    };

    Adam() = default;
    Adam(ParamRefs params, Config cfg) : params_(std::move(params)), cfg_(cfg) {
        for (Param* p : params_) {
            m_.emplace_back(p->w.shape());
            v_.emplace_back(p->w.shape());
        }
    }

    const Config& config() const { return cfg_; }

    void zero_grad() {
        for (Param* p : params_) p->zero_grad();
    }

    void step() {
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (size_t i = 0; i < params_.size(); ++i) {
            Tensor& w = params_[i]->w;
            const Tensor& g = params_[i]->g;
            Tensor& m = m_[i];
            Tensor& v = v_[i];
            for (std::int64_t j = 0; j < w.size(); ++j) {
                m[j] = cfg_.beta1 * m[j] + (1.0 - cfg_.beta1) * g[j];
                v[j] = cfg_.beta2 * v[j] + (1.0 - cfg_.beta2) * g[j] * g[j];
                const double mh = m[j] / bc1;
                const double vh = v[j] / bc2;
                w[j] -= cfg_.lr * mh / (std::sqrt(vh) + cfg_.eps);
            }
        }
    }

private:
    ParamRefs params_;
    Config cfg_;
    std::vector<Tensor> m_, v_;
    long t_ = 0;
};

}  // namespace treering::nn
