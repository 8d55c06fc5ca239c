#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/tensor.hpp"

namespace treering::codec {

// Encoder/decoder pair E, E^-1 between pixel space and the diffusion latent
// space. encode() is deterministic (posterior mean); decode() clips its
// output to the pixel range.
class Codec {
public:
    virtual ~Codec() = default;

    virtual SpatialTensor encode(const SpatialTensor& image) const = 0;
    virtual SpatialTensor decode(const SpatialTensor& latent) const = 0;

    virtual std::vector<int> latent_shape() const = 0;  // CHW
    virtual std::vector<int> pixel_shape() const = 0;   // CHW

    virtual bool is_identity() const { return false; }
    virtual bool differentiable() const = 0;

    // Stable fingerprint of parameters + architecture; lands in manifests.
    virtual std::string identity_hash() const = 0;

    // dL/d(image) given dL/d(encode(image)); used by attacks that
    // backpropagate through the encoder.
    virtual Tensor encode_input_grad(const SpatialTensor& image, const Tensor& grad_latent) const = 0;
};

// Pass-through codec for the pixel-space (no-VAE) pipeline: encode retags the
// image as a latent, decode clips back to pixel range.
class IdentityCodec : public Codec {
public:
    explicit IdentityCodec(std::vector<int> pixel_shape) : shape_(std::move(pixel_shape)) {}

    SpatialTensor encode(const SpatialTensor& image) const override;
    SpatialTensor decode(const SpatialTensor& latent) const override;
    std::vector<int> latent_shape() const override { return shape_; }
    std::vector<int> pixel_shape() const override { return shape_; }
    bool is_identity() const override { return true; }
    bool differentiable() const override { return true; }
    std::string identity_hash() const override;
    Tensor encode_input_grad(const SpatialTensor& image, const Tensor& grad_latent) const override;

private:
    std::vector<int> shape_;
};

using CodecPtr = std::shared_ptr<const Codec>;

}  // namespace treering::codec
