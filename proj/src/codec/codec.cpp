#include "codec/codec.hpp"

#include <stdexcept>

#include "core/hash.hpp"

namespace treering::codec {

SpatialTensor IdentityCodec::encode(const SpatialTensor& image) const {
    if (image.domain != Domain::pixel) throw std::invalid_argument("IdentityCodec::encode: expected pixel domain");
    if (image.data.shape() != shape_) throw std::invalid_argument("IdentityCodec::encode: shape mismatch");
    return make_latent(image.data);
}

SpatialTensor IdentityCodec::decode(const SpatialTensor& latent) const {
    if (latent.data.shape() != shape_) throw std::invalid_argument("IdentityCodec::decode: shape mismatch");
    Tensor out = latent.data;
    out.clamp(-1.0, 1.0);
    return make_pixel(std::move(out));
}

std::string IdentityCodec::identity_hash() const {
    std::string s = "identity";
    for (int d : shape_) s += ":" + std::to_string(d);
    return hash_hex(fnv1a64(s));
}

Tensor IdentityCodec::encode_input_grad(const SpatialTensor& image, const Tensor& grad_latent) const {
    if (!image.data.same_shape(grad_latent)) throw std::invalid_argument("IdentityCodec: grad shape mismatch");
    return grad_latent;
}

}  // namespace treering::codec
