#include "core/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treering {

namespace {
std::int64_t shape_size(const std::vector<int>& shape) {
    std::int64_t n = shape.empty() ? 0 : 1;
    for (int d : shape) {
        if (d < 0) throw std::invalid_argument("tensor dimension must be non-negative");
        n *= d;
    }
    return n;
}
}  // namespace

Tensor::Tensor(std::vector<int> shape) : shape_(std::move(shape)), data_(static_cast<size_t>(shape_size(shape_)), 0.0) {}

Tensor::Tensor(std::vector<int> shape, double fill_value)
    : shape_(std::move(shape)), data_(static_cast<size_t>(shape_size(shape_)), fill_value) {}

double& Tensor::at(int c, int y, int x) {
    return data_[static_cast<size_t>((static_cast<std::int64_t>(c) * shape_[1] + y) * shape_[2] + x)];
}

double Tensor::at(int c, int y, int x) const {
    return data_[static_cast<size_t>((static_cast<std::int64_t>(c) * shape_[1] + y) * shape_[2] + x)];
}

double& Tensor::at(int n, int c, int y, int x) {
    return data_[static_cast<size_t>(((static_cast<std::int64_t>(n) * shape_[1] + c) * shape_[2] + y) * shape_[3] + x)];
}

double Tensor::at(int n, int c, int y, int x) const {
    return data_[static_cast<size_t>(((static_cast<std::int64_t>(n) * shape_[1] + c) * shape_[2] + y) * shape_[3] + x)];
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Tensor& Tensor::add(const Tensor& o) {
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

Tensor& Tensor::sub(const Tensor& o) {
    for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

Tensor& Tensor::mul(const Tensor& o) {
    for (size_t i = 0; i < data_.size(); ++i) data_[i] *= o.data_[i];
    return *this;
}

Tensor& Tensor::axpy(double a, const Tensor& o) {
    for (size_t i = 0; i < data_.size(); ++i) data_[i] += a * o.data_[i];
    return *this;
}

Tensor& Tensor::scale(double a) {
    for (double& v : data_) v *= a;
    return *this;
}

Tensor& Tensor::clamp(double lo, double hi) {
    for (double& v : data_) v = std::min(hi, std::max(lo, v));
    return *this;
}

double Tensor::dot(const Tensor& o) const {
    double s = 0.0;
    for (size_t i = 0; i < data_.size(); ++i) s += data_[i] * o.data_[i];
    return s;
}

double Tensor::sum() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s;
}

double Tensor::mean() const { return data_.empty() ? 0.0 : sum() / static_cast<double>(data_.size()); }

double Tensor::min() const {
    double m = data_.empty() ? 0.0 : data_[0];
    for (double v : data_) m = std::min(m, v);
    return m;
}

double Tensor::max() const {
    double m = data_.empty() ? 0.0 : data_[0];
    for (double v : data_) m = std::max(m, v);
    return m;
}

double Tensor::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Tensor Tensor::reshaped(std::vector<int> shape) const {
    if (shape_size(shape) != size()) throw std::invalid_argument("reshape: element count mismatch");
    Tensor t;
    t.shape_ = std::move(shape);
    t.data_ = data_;
    return t;
}

Tensor operator+(const Tensor& a, const Tensor& b) {
    Tensor r = a;
    r.add(b);
    return r;
}

Tensor operator-(const Tensor& a, const Tensor& b) {
    Tensor r = a;
    r.sub(b);
    return r;
}

Tensor operator*(const Tensor& a, double s) {
    Tensor r = a;
    r.scale(s);
    return r;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::int64_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double mean_abs_diff(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("mean_abs_diff: shape mismatch");
    if (a.size() == 0) return 0.0;
    double s = 0.0;
    for (std::int64_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

double mse(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("mse: shape mismatch");
    if (a.size() == 0) return 0.0;
    double s = 0.0;
    for (std::int64_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

double cosine_similarity(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("cosine_similarity: shape mismatch");
    const double na = std::sqrt(a.dot(a));
    const double nb = std::sqrt(b.dot(b));
    if (na == 0.0 || nb == 0.0) return 0.0;
    return a.dot(b) / (na * nb);
}

SpatialTensor make_pixel(Tensor chw) { return SpatialTensor{std::move(chw), Domain::pixel}; }
SpatialTensor make_latent(Tensor chw) { return SpatialTensor{std::move(chw), Domain::latent}; }

}  // namespace treering
