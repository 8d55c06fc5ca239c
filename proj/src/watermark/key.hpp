#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/fft.hpp"
#include "core/tensor.hpp"

namespace treering::wm {

// One keyed bin of the centered spectrum. Ring values are written at
// canonical positions and conjugated at their point-reflected mirrors so the
// embedded channel stays exactly real after the inverse transform.
struct MaskEntry {
    int u = 0, v = 0;       // centered spectrum coordinates (row, col)
    int ring = 0;           // index into ring_values
    bool conjugate = false; // carries conj(ring_values[ring])
};

// Tree-Ring key: concentric integer-radius rings in the centered spectrum of
// one carrier channel, one constant complex value per ring.
struct FrequencyKey {
    int height = 0, width = 0;  // carrier plane
    int channel = 0;            // carrier channel index
    std::vector<int> ring_radii;
    std::vector<cplx> ring_values;
    std::vector<MaskEntry> mask;  // row-major order over (u, v)
    double tau = 0.0;             // detection threshold
    std::uint64_t seed = 0;
    double value_scale = 1.0;

    cplx target(const MaskEntry& e) const {
        return e.conjugate ? std::conj(ring_values[static_cast<size_t>(e.ring)]) : ring_values[static_cast<size_t>(e.ring)];
    }

    bool in_mask(int u, int v) const;

    void save(const std::string& path) const;
    static FrequencyKey load(const std::string& path);
};

// Integer-rounded Euclidean ring membership on the centered grid; mirrors the
// lattice-count oracle in the tests.
int ring_of(int u, int v, int H, int W);

// Draws a Gaussian plane, takes its centered spectrum, and uses the value at
// (dy=0, dx=+radius) as each ring's constant (times value_scale). The mask
// covers every bin whose rounded radius matches a ring radius.
FrequencyKey generate_key(int height, int width, const std::vector<int>& radii, int channel, std::uint64_t rng_seed,
                          double value_scale = 1.0);

// Writes the key into the carrier channel's centered spectrum (conjugate
// pairs preserved), inverse-transforms, keeps the real part. Non-carrier
// channels pass through untouched.
SpatialTensor embed_key(const SpatialTensor& xT, const FrequencyKey& key);

// Centered spectrum of the carrier channel restricted to the mask, in mask
// order.
std::vector<cplx> extract_key(const SpatialTensor& xT_hat, const FrequencyKey& key);

// Mean L1 distance per masked position over concatenated real/imaginary
// parts; scale-free across mask sizes.
double key_distance(const std::vector<cplx>& extracted, const FrequencyKey& key);

}  // namespace treering::wm
