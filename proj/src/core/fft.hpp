#pragma once

#include <complex>
#include <vector>

#include "core/tensor.hpp"

namespace treering {

using cplx = std::complex<double>;

// Centered, unitary 2D DFT on an H x W grid. "Centered" means the
// zero-frequency bin sits at (H/2, W/2); the frequency at grid index (u, v)
// is (u - H/2, v - W/2). Unitary scaling (1/sqrt(N) each way) keeps spectra
// on the same scale as the spatial data, so key values, detection distances
// and surrogate inputs are all O(1).
//
// Power-of-two sizes run radix-2; anything else falls back to a direct DFT,
// which is plenty at lab sizes.

// Forward transform of one real plane.
std::vector<cplx> fft2_centered(const double* plane, int H, int W);

// Forward transform of a complex grid.
std::vector<cplx> fft2_centered(const std::vector<cplx>& grid, int H, int W);

// Inverse of fft2_centered; returns the real part (callers that need the
// exact complex inverse use ifft2_centered_complex).
std::vector<double> ifft2_centered_real(const std::vector<cplx>& spec, int H, int W);
std::vector<cplx> ifft2_centered_complex(const std::vector<cplx>& spec, int H, int W);

// Gradient helper: given dL/d(spectrum) of out = fft2_centered(x) for a real
// plane x, returns dL/dx. (The transform is linear; this is its adjoint
// restricted to real inputs.)
std::vector<double> fft2_centered_adjoint(const std::vector<cplx>& grad_spec, int H, int W);

// Per-channel centered spectrum of a CHW tensor; channel c occupies
// [c*H*W, (c+1)*H*W) of the result.
std::vector<cplx> fft2_centered_chw(const Tensor& chw);

// Mirror of centered index (u, v) under point reflection through the DC bin;
// for real planes the spectrum satisfies spec[mirror] == conj(spec[(u,v)]).
// Returns {u, v} itself for self-mirrored bins (DC and Nyquist lines).
std::pair<int, int> mirror_centered(int u, int v, int H, int W);

}  // namespace treering
