#include "diffusion/ddim.hpp"

#include <cmath>
#include <stdexcept>

namespace treering::diff {

namespace {
void check_schedule_binding(const NoisePredictor& model, const NoiseSchedule& sched) {
    if (model.schedule_hash() != sched.profile_hash())
        throw std::invalid_argument("denoiser was trained against a different noise schedule profile");
}
}  // namespace

SpatialTensor forward_noise(const SpatialTensor& x0, int t, const Tensor& eps, const NoiseSchedule& sched) {
    if (t < 0 || t > sched.T) throw std::invalid_argument("forward_noise: t out of range");
    if (!x0.data.same_shape(eps)) throw std::invalid_argument("forward_noise: eps shape mismatch");
    const double a = sched.alpha(t);
    Tensor out(x0.data.shape());
    const double ca = std::sqrt(a), ce = std::sqrt(1.0 - a);
    for (std::int64_t i = 0; i < out.size(); ++i) out[i] = ca * x0.data[i] + ce * eps[i];
    return SpatialTensor{std::move(out), x0.domain};
}

SpatialTensor estimate_x0(const SpatialTensor& xt, int t, const Tensor& eps_pred, const NoiseSchedule& sched) {
    if (t < 1 || t > sched.T) throw std::invalid_argument("estimate_x0: t must be in [1, T]");
    if (!xt.data.same_shape(eps_pred)) throw std::invalid_argument("estimate_x0: eps shape mismatch");
    const double a = sched.alpha(t);
    const double inv = 1.0 / std::sqrt(a), ce = std::sqrt(1.0 - a);
    Tensor out(xt.data.shape());
    for (std::int64_t i = 0; i < out.size(); ++i) out[i] = (xt.data[i] - ce * eps_pred[i]) * inv;
    return SpatialTensor{std::move(out), xt.domain};
}

SpatialTensor ddim_step(const SpatialTensor& xt, int t, const NoisePredictor& model, int cond,
                        const NoiseSchedule& sched) {
    if (t < 1 || t > sched.T) throw std::invalid_argument("ddim_step: t must be in [1, T]");
    check_schedule_binding(model, sched);
    const Tensor eps = model.predict(xt.data, static_cast<double>(t) / sched.T, cond);
    const SpatialTensor x0e = estimate_x0(xt, t, eps, sched);
    const double ap = sched.alpha(t - 1);
    const double ca = std::sqrt(ap), ce = std::sqrt(1.0 - ap);
    Tensor out(xt.data.shape());
    for (std::int64_t i = 0; i < out.size(); ++i) out[i] = ca * x0e.data[i] + ce * eps[i];
    return SpatialTensor{std::move(out), xt.domain};
}

SpatialTensor ddim_sample(const SpatialTensor& xT, const NoisePredictor& model, int cond,
                          const NoiseSchedule& sched) {
    check_schedule_binding(model, sched);
    SpatialTensor x = xT;
    for (int t = sched.T; t >= 1; --t) x = ddim_step(x, t, model, cond, sched);
    return x;
}

SpatialTensor ddim_invert(const SpatialTensor& x0, const NoisePredictor& model, const NoiseSchedule& sched,
                          int cond) {
    check_schedule_binding(model, sched);
    SpatialTensor x = x0;
    for (int t = 0; t < sched.T; ++t) {
        const Tensor eps = model.predict(x.data, static_cast<double>(t) / sched.T, cond);
        const double a = sched.alpha(t);
        const double an = sched.alpha(t + 1);
        // x0 estimate at the current step; at t=0 this reduces to x itself.
        const double inv = 1.0 / std::sqrt(a), ce = std::sqrt(1.0 - a);
        const double can = std::sqrt(an), cen = std::sqrt(1.0 - an);
        Tensor next(x.data.shape());
        for (std::int64_t i = 0; i < next.size(); ++i) {
            const double x0e = (x.data[i] - ce * eps[i]) * inv;
            next[i] = can * x0e + cen * eps[i];
        }
        x.data = std::move(next);
    }
    return x;
}

}  // namespace treering::diff
