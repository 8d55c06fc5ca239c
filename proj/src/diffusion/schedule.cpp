#include "diffusion/schedule.hpp"

#include <cmath>
#include <stdexcept>

#include "core/hash.hpp"

namespace treering::diff {

namespace {
constexpr double kPi = 3.14159265358979323846;

double cosine_f(double u) {
    const double c = std::cos((u + 0.008) / 1.008 * kPi / 2.0);
    return c * c;
}
}  // namespace

double schedule_profile(ScheduleKind kind, double alpha_end, double s) {
    if (s <= 0.0) return 1.0;
    if (kind == ScheduleKind::linear) {
        return 1.0 - (1.0 - alpha_end) * s;
    }
    // cosine: evaluate at a compressed time u = s * s_max with s_max solved
    // so the profile lands exactly on alpha_end at s = 1.
    const double f0 = cosine_f(0.0);
    const double theta = std::acos(std::sqrt(alpha_end * f0));
    const double s_max = theta / (kPi / 2.0) * 1.008 - 0.008;
    return cosine_f(s * s_max) / f0;
}

NoiseSchedule make_schedule(int T, ScheduleKind kind, double alpha_end) {
    if (T < 2) throw std::invalid_argument("make_schedule: T must be >= 2");
    if (alpha_end == 0.0) alpha_end = kind == ScheduleKind::linear ? 0.02 : 0.01;
    if (alpha_end <= 0.0 || alpha_end > 0.05)
        throw std::invalid_argument("make_schedule: alpha_end must lie in (0, 0.05]");
    NoiseSchedule s;
    s.T = T;
    s.kind = kind;
    s.alpha_end = alpha_end;
    s.alphas.resize(static_cast<size_t>(T) + 1);
    for (int t = 0; t <= T; ++t)
        s.alphas[static_cast<size_t>(t)] = schedule_profile(kind, alpha_end, static_cast<double>(t) / T);
    s.validate();
    return s;
}

void NoiseSchedule::validate() const {
    if (T < 2 || static_cast<int>(alphas.size()) != T + 1) throw std::invalid_argument("schedule: bad length");
    if (alphas[0] != 1.0) throw std::invalid_argument("schedule: alpha_0 must be exactly 1");
    for (int t = 0; t <= T; ++t) {
        const double a = alphas[static_cast<size_t>(t)];
        if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("schedule: alpha out of (0,1]");
        if (t > 0 && !(a < alphas[static_cast<size_t>(t) - 1]))
            throw std::invalid_argument("schedule: alphas must be strictly decreasing");
    }
    if (alphas.back() > 0.05) throw std::invalid_argument("schedule: alpha_T must be <= 0.05");
}

std::string NoiseSchedule::profile_hash() const {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s:%.12g", schedule_kind_name(kind).c_str(), alpha_end);
    return hash_hex(fnv1a64(buf));
}

std::string schedule_kind_name(ScheduleKind k) { return k == ScheduleKind::linear ? "linear" : "cosine"; }

ScheduleKind schedule_kind_from(const std::string& name) {
    if (name == "linear") return ScheduleKind::linear;
    if (name == "cosine") return ScheduleKind::cosine;
    throw std::invalid_argument("unknown schedule kind: " + name);
}

}  // namespace treering::diff
