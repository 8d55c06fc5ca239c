#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace treering {

// Dense row-major double tensor. Rank is small (<= 4): images and latents
// are CHW, batches NCHW, weights OIKK. All numeric code in the lab runs in
// double so test tolerances hold without per-kernel fudge factors.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<int> shape);
    Tensor(std::vector<int> shape, double fill_value);

    static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
    static Tensor full(std::vector<int> shape, double v) { return Tensor(std::move(shape), v); }

    int rank() const { return static_cast<int>(shape_.size()); }
    int dim(int i) const { return shape_[static_cast<size_t>(i)]; }
    const std::vector<int>& shape() const { return shape_; }
    std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }
    bool empty() const { return data_.empty(); }
    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double& operator[](std::int64_t i) { return data_[static_cast<size_t>(i)]; }
    double operator[](std::int64_t i) const { return data_[static_cast<size_t>(i)]; }

    // CHW / NCHW accessors.
    double& at(int c, int y, int x);
    double at(int c, int y, int x) const;
    double& at(int n, int c, int y, int x);
    double at(int n, int c, int y, int x) const;

    void fill(double v);
    Tensor& add(const Tensor& o);
    Tensor& sub(const Tensor& o);
    Tensor& mul(const Tensor& o);
    Tensor& axpy(double a, const Tensor& o);  // this += a * o
    Tensor& scale(double a);
    Tensor& clamp(double lo, double hi);

    double dot(const Tensor& o) const;
    double sum() const;
    double mean() const;
    double min() const;
    double max() const;
    double max_abs() const;

    Tensor reshaped(std::vector<int> shape) const;

private:
    std::vector<int> shape_;
    std::vector<double> data_;
};

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);
Tensor operator*(const Tensor& a, double s);

// Max absolute elementwise difference; tensors must share a shape.
double max_abs_diff(const Tensor& a, const Tensor& b);
double mean_abs_diff(const Tensor& a, const Tensor& b);
double mse(const Tensor& a, const Tensor& b);
double cosine_similarity(const Tensor& a, const Tensor& b);

// Domain tag for image-vs-latent tensors. Pixel-domain values live in
// [-1, 1] once finalized; latent values are unconstrained.
enum class Domain { pixel, latent };

struct SpatialTensor {
    Tensor data;  // CHW
    Domain domain = Domain::pixel;

    int channels() const { return data.dim(0); }
    int height() const { return data.dim(1); }
    int width() const { return data.dim(2); }
};

SpatialTensor make_pixel(Tensor chw);
SpatialTensor make_latent(Tensor chw);

}  // namespace treering
