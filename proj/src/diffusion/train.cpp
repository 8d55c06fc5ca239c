#include "diffusion/train.hpp"

#include <cmath>
#include <stdexcept>

#include "core/hash.hpp"
#include "nn/adam.hpp"
#include "nn/checkpoint.hpp"

namespace treering::diff {

void DiffusionTrainConfig::validate() const {
    if (epochs <= 0 || batch_size <= 0 || lr <= 0.0 || train_T < 2)
        throw std::invalid_argument("DiffusionTrainConfig: fields must be positive");
    if (cond_dropout < 0.0 || cond_dropout > 1.0)
        throw std::invalid_argument("DiffusionTrainConfig: cond_dropout must be in [0,1]");
}

namespace {

Tensor batch_of(const std::vector<Tensor>& data, const std::vector<int>& idx) {
    const Tensor& first = data[static_cast<size_t>(idx[0])];
    const int C = first.dim(0), H = first.dim(1), W = first.dim(2);
    Tensor b({static_cast<int>(idx.size()), C, H, W});
    const std::int64_t sz = first.size();
    for (size_t n = 0; n < idx.size(); ++n)
        std::copy(data[static_cast<size_t>(idx[n])].data(), data[static_cast<size_t>(idx[n])].data() + sz,
                  b.data() + static_cast<std::int64_t>(n) * sz);
    return b;
}

}  // namespace

DenoiserModel train_denoiser(const std::vector<Tensor>& dataset, const std::vector<int>& conds,
                             const NoiseSchedule& sched, const UNetConfig& arch, const DiffusionTrainConfig& cfg,
                             std::ostream* log) {
    cfg.validate();
    if (dataset.empty()) throw std::invalid_argument("train_denoiser: empty dataset");
    for (const Tensor& t : dataset)
        if (!t.same_shape(dataset.front())) throw std::invalid_argument("train_denoiser: mixed shapes in dataset");
    if (conds.size() != dataset.size()) throw std::invalid_argument("train_denoiser: conds size mismatch");

    const NoiseSchedule dense = make_schedule(cfg.train_T, sched.kind, sched.alpha_end);

    DenoiserModel model;
    UNetConfig a = arch;
    a.in_ch = dataset.front().dim(0);
    a.init_seed = Rng::derive(cfg.seed, "unet-init");
    model.net = UNet(a);
    model.sched_hash = sched.profile_hash();
    model.sched_kind = sched.kind;
    model.alpha_end = sched.alpha_end;
    model.seed = cfg.seed;

    nn::ParamRefs params;
    model.net.collect(params);
    nn::Adam::Config ac;
    ac.lr = cfg.lr;
    nn::Adam opt(params, ac);

    Rng rng(Rng::derive(cfg.seed, "denoiser-train"));
    const int n = static_cast<int>(dataset.size());
    double epoch_loss = 0.0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const std::vector<int> perm = rng.permutation(n);
        double acc = 0.0;
        int batches = 0;
        for (int start = 0; start < n; start += cfg.batch_size) {
            const int bsz = std::min(cfg.batch_size, n - start);
            std::vector<int> idx(perm.begin() + start, perm.begin() + start + bsz);
            Tensor x0 = batch_of(dataset, idx);
            Tensor eps(x0.shape());
            rng.fill_normal(eps);
            std::vector<double> svec(static_cast<size_t>(bsz));
            std::vector<int> cvec(static_cast<size_t>(bsz));
            Tensor xt(x0.shape());
            const std::int64_t sz = dataset.front().size();
            for (int b = 0; b < bsz; ++b) {
                const int t = rng.uniform_int(1, dense.T);
                svec[static_cast<size_t>(b)] = static_cast<double>(t) / dense.T;
                const int c = conds[static_cast<size_t>(idx[static_cast<size_t>(b)])];
                cvec[static_cast<size_t>(b)] = rng.uniform() < cfg.cond_dropout ? kEmptyCond : c;
                const double ca = std::sqrt(dense.alpha(t)), ce = std::sqrt(1.0 - dense.alpha(t));
                for (std::int64_t i = 0; i < sz; ++i) {
                    const std::int64_t o = static_cast<std::int64_t>(b) * sz + i;
                    xt[o] = ca * x0[o] + ce * eps[o];
                }
            }
            UNet::Ctx ctx;
            Tensor pred = model.net.forward(xt, svec, cvec, &ctx);
            nn::LossGrad lg = nn::mse_loss(pred, eps);
            opt.zero_grad();
            model.net.backward(lg.grad, ctx);
            opt.step();
            acc += lg.loss;
            ++batches;
        }
        epoch_loss = acc / std::max(1, batches);
        if (log && (epoch % 10 == 0 || epoch == cfg.epochs - 1))
            (*log) << "epoch " << epoch << " eps-mse " << epoch_loss << "\n";
    }
    model.final_loss = epoch_loss;
    model.meta = {{"kind", "denoiser"},
                  {"seed", cfg.seed},
                  {"final_loss", model.final_loss},
                  {"schedule", {{"kind", schedule_kind_name(sched.kind)}, {"alpha_end", sched.alpha_end},
                                {"hash", model.sched_hash}}},
                  {"train_T", cfg.train_T},
                  {"epochs", cfg.epochs},
                  {"batch_size", cfg.batch_size},
                  {"lr", cfg.lr},
                  {"cond_dropout", cfg.cond_dropout},
                  {"dataset_path", cfg.dataset_path},
                  {"arch", {{"in_ch", a.in_ch}, {"channels", a.channels}, {"time_dim", a.time_dim},
                            {"num_classes", a.num_classes}, {"init_seed", a.init_seed}}}};
    return model;
}

double eval_eps_mse(const DenoiserModel& model, const std::vector<Tensor>& dataset, const std::vector<int>& conds,
                    const NoiseSchedule& sched, std::uint64_t seed) {
    if (dataset.empty()) throw std::invalid_argument("eval_eps_mse: empty dataset");
    Rng rng(Rng::derive(seed, "eps-mse-eval"));
    double acc = 0.0;
    for (size_t i = 0; i < dataset.size(); ++i) {
        const Tensor& x0 = dataset[i];
        Tensor eps(x0.shape());
        rng.fill_normal(eps);
        const int t = rng.uniform_int(1, sched.T);
        const double ca = std::sqrt(sched.alpha(t)), ce = std::sqrt(1.0 - sched.alpha(t));
        Tensor xt(x0.shape());
        for (std::int64_t j = 0; j < xt.size(); ++j) xt[j] = ca * x0[j] + ce * eps[j];
        Tensor pred = model.net.forward(xt.reshaped({1, x0.dim(0), x0.dim(1), x0.dim(2)}),
                                        {static_cast<double>(t) / sched.T}, {conds[i]}, nullptr);
        acc += mse(pred.reshaped(x0.shape()), eps);
    }
    return acc / static_cast<double>(dataset.size());
}

void DenoiserModel::save(const std::string& path) const {
    nn::Checkpoint ck;
    ck.meta = meta;
    nn::ParamRefs params;
    const_cast<UNet&>(net).collect(params);
    ck.add_params(params);
    ck.save(path);
}

DenoiserModel DenoiserModel::load(const std::string& path) {
    const nn::Checkpoint ck = nn::Checkpoint::load(path);
    if (ck.meta.value("kind", "") != "denoiser") throw std::runtime_error("not a denoiser checkpoint: " + path);
    DenoiserModel m;
    UNetConfig a;
    a.in_ch = ck.meta["arch"]["in_ch"].get<int>();
    a.channels = ck.meta["arch"]["channels"].get<std::vector<int>>();
    a.time_dim = ck.meta["arch"]["time_dim"].get<int>();
    a.num_classes = ck.meta["arch"]["num_classes"].get<int>();
    a.init_seed = ck.meta["arch"]["init_seed"].get<std::uint64_t>();
    m.net = UNet(a);
    nn::ParamRefs params;
    m.net.collect(params);
    ck.restore_params(params);
    m.meta = ck.meta;
    m.sched_hash = ck.meta["schedule"]["hash"].get<std::string>();
    m.sched_kind = schedule_kind_from(ck.meta["schedule"]["kind"].get<std::string>());
    m.alpha_end = ck.meta["schedule"]["alpha_end"].get<double>();
    m.seed = ck.meta["seed"].get<std::uint64_t>();
    m.final_loss = ck.meta["final_loss"].get<double>();
    return m;
}

}  // namespace treering::diff
