#include "watermark/key.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "core/io.hpp"
#include "core/rng.hpp"

namespace treering::wm {

int ring_of(int u, int v, int H, int W) {
    const double dy = u - H / 2, dx = v - W / 2;
    return static_cast<int>(std::lround(std::sqrt(dy * dy + dx * dx)));
}

bool FrequencyKey::in_mask(int u, int v) const {
    const int r = ring_of(u, v, height, width);
    return std::find(ring_radii.begin(), ring_radii.end(), r) != ring_radii.end();
}

FrequencyKey generate_key(int height, int width, const std::vector<int>& radii, int channel, std::uint64_t rng_seed,
                          double value_scale) {
    if (radii.empty()) throw std::invalid_argument("generate_key: need at least one radius");
    for (size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 0) throw std::invalid_argument("generate_key: negative radius");
        if (i > 0 && radii[i] <= radii[i - 1]) throw std::invalid_argument("generate_key: radii must be strictly increasing");
    }
    if (2 * radii.back() >= std::min(height, width))
        throw std::invalid_argument("generate_key: max radius must be < min(H,W)/2");
    if (channel < 0) throw std::invalid_argument("generate_key: bad channel");

    FrequencyKey key;
    key.height = height;
    key.width = width;
    key.channel = channel;
    key.ring_radii = radii;
    key.seed = rng_seed;
    key.value_scale = value_scale;

    Rng rng(rng_seed);
    Tensor g({height, width});
    rng.fill_normal(g);
    const std::vector<cplx> spec = fft2_centered(g.data(), height, width);
    for (int r : radii) {
        const cplx v = spec[static_cast<size_t>(height / 2) * width + (width / 2 + r)];
        key.ring_values.push_back(v * value_scale);
    }

    for (int u = 0; u < height; ++u) {
        for (int v = 0; v < width; ++v) {
            const int r = ring_of(u, v, height, width);
            const auto it = std::find(radii.begin(), radii.end(), r);
            if (it == radii.end()) continue;
            MaskEntry e;
            e.u = u;
            e.v = v;
            e.ring = static_cast<int>(it - radii.begin());
            const int dy = u - height / 2, dx = v - width / 2;
            e.conjugate = dy < 0 || (dy == 0 && dx < 0);
            key.mask.push_back(e);
        }
    }
    return key;
}

SpatialTensor embed_key(const SpatialTensor& xT, const FrequencyKey& key) {
    const Tensor& x = xT.data;
    if (x.rank() != 3 || x.dim(1) != key.height || x.dim(2) != key.width)
        throw std::invalid_argument("embed_key: shape mismatch with key");
    if (key.channel >= x.dim(0)) throw std::invalid_argument("embed_key: carrier channel out of range");
    Tensor out = x;
    if (key.mask.empty()) return SpatialTensor{std::move(out), xT.domain};
    const int H = key.height, W = key.width;
    std::vector<cplx> spec = fft2_centered(x.data() + static_cast<std::int64_t>(key.channel) * H * W, H, W);
    for (const MaskEntry& e : key.mask) spec[static_cast<size_t>(e.u) * W + e.v] = key.target(e);
    const std::vector<double> plane = ifft2_centered_real(spec, H, W);
    std::copy(plane.begin(), plane.end(), out.data() + static_cast<std::int64_t>(key.channel) * H * W);
    return SpatialTensor{std::move(out), xT.domain};
}

std::vector<cplx> extract_key(const SpatialTensor& xT_hat, const FrequencyKey& key) {
    const Tensor& x = xT_hat.data;
    if (x.rank() != 3 || x.dim(1) != key.height || x.dim(2) != key.width)
        throw std::invalid_argument("extract_key: shape mismatch with key");
    if (key.channel >= x.dim(0)) throw std::invalid_argument("extract_key: carrier channel out of range");
    const int H = key.height, W = key.width;
    const std::vector<cplx> spec = fft2_centered(x.data() + static_cast<std::int64_t>(key.channel) * H * W, H, W);
    std::vector<cplx> vals;
    vals.reserve(key.mask.size());
    for (const MaskEntry& e : key.mask) vals.push_back(spec[static_cast<size_t>(e.u) * W + e.v]);
    return vals;
}

double key_distance(const std::vector<cplx>& extracted, const FrequencyKey& key) {
    if (extracted.size() != key.mask.size()) throw std::invalid_argument("key_distance: size mismatch");
    if (extracted.empty()) return 0.0;
    double acc = 0.0;
    for (size_t i = 0; i < extracted.size(); ++i) {
        const cplx t = key.target(key.mask[i]);
        acc += std::abs(extracted[i].real() - t.real()) + std::abs(extracted[i].imag() - t.imag());
    }
    return acc / (2.0 * static_cast<double>(extracted.size()));
}

void FrequencyKey::save(const std::string& path) const {
    nlohmann::json j;
    j["format"] = "treering-key";
    j["version"] = 1;
    j["height"] = height;
    j["width"] = width;
    j["channel"] = channel;
    j["radii"] = ring_radii;
    std::vector<std::vector<double>> vals;
    for (const cplx& v : ring_values) vals.push_back({v.real(), v.imag()});
    j["ring_values"] = vals;
    j["tau"] = tau;
    j["seed"] = seed;
    j["value_scale"] = value_scale;
    write_text_file(path, j.dump(2) + "\n");
}

FrequencyKey FrequencyKey::load(const std::string& path) {
    const nlohmann::json j = nlohmann::json::parse(read_text_file(path));
    if (j.value("format", "") != "treering-key") throw std::runtime_error("not a key file: " + path);
    FrequencyKey key = generate_key(j["height"].get<int>(), j["width"].get<int>(), j["radii"].get<std::vector<int>>(),
                                    j["channel"].get<int>(), j["seed"].get<std::uint64_t>(),
                                    j["value_scale"].get<double>());
    // Stored values win over regeneration (guards against RNG drift).
    const auto vals = j["ring_values"].get<std::vector<std::vector<double>>>();
    if (vals.size() != key.ring_values.size()) throw std::runtime_error("key file ring count mismatch: " + path);
    for (size_t i = 0; i < vals.size(); ++i) key.ring_values[i] = cplx(vals[i][0], vals[i][1]);
    key.tau = j["tau"].get<double>();
    return key;
}

}  // namespace treering::wm
