#pragma once

#include <string>
#include <vector>

namespace treering::diff {

enum class ScheduleKind { linear, cosine };

// Cumulative-product noise schedule: alphas[t] is the closed-form
// coefficient of x0 at step t (x_t = sqrt(a_t) x0 + sqrt(1-a_t) eps).
// Schedules are discretizations of a continuous profile a(s), s = t/T, so a
// dense training schedule and a coarse inference schedule with the same
// profile agree exactly on shared grid points. The profile hash — not the
// discretization — is what checkpoints pin.
struct NoiseSchedule {
    std::vector<double> alphas;  // size T+1, alphas[0] == 1 exactly
    int T = 0;
    ScheduleKind kind = ScheduleKind::cosine;
    double alpha_end = 0.0;

    double alpha(int t) const { return alphas[static_cast<size_t>(t)]; }

    // Hash of (kind, alpha_end); independent of T.
    std::string profile_hash() const;

    void validate() const;  // throws on any invariant violation
};

// Continuous profile value at s in [0,1].
double schedule_profile(ScheduleKind kind, double alpha_end, double s);

// kind=linear: a(s) falls linearly from 1 to alpha_end.
// kind=cosine: squared-cosine profile, time-compressed so a(1) == alpha_end
// without clamping (keeps the sequence strictly decreasing).
NoiseSchedule make_schedule(int T, ScheduleKind kind, double alpha_end = 0.0);

std::string schedule_kind_name(ScheduleKind k);
ScheduleKind schedule_kind_from(const std::string& name);

}  // namespace treering::diff
