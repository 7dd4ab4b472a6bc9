#include "tcalc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace tcalc {

std::size_t numel_of(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t e : shape) n *= e;
    return n;
}

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& shape) {
    std::vector<std::size_t> s(shape.size());
    std::size_t acc = 1;
    for (std::size_t d = shape.size(); d-- > 0;) {
        s[d] = acc;
        acc *= shape[d];
    }
    return s;
}

static void check_extents(const std::vector<std::size_t>& shape) {
    for (std::size_t e : shape)
        if (e == 0) throw ShapeError("tensor extents must be >= 1");
}

Tensor Tensor::zeros(std::vector<std::size_t> shape, Dtype dt) {
    check_extents(shape);
    Tensor t;
    t.shape_ = std::move(shape);
    t.dtype_ = dt;
    std::size_t n = numel_of(t.shape_);
    if (dt == Dtype::f64) {
        t.rdata_.assign(n, 0.0);
        t.cdata_.clear();
    } else {
        t.cdata_.assign(n, cplx(0.0, 0.0));
        t.rdata_.clear();
    }
    return t;
}

Tensor Tensor::from_real(std::vector<std::size_t> shape, std::vector<double> data) {
    check_extents(shape);
    if (numel_of(shape) != data.size())
        throw ShapeError("data length " + std::to_string(data.size()) +
                         " does not match product of extents " +
                         std::to_string(numel_of(shape)));
    Tensor t;
    t.shape_ = std::move(shape);
    t.dtype_ = Dtype::f64;
    t.rdata_ = std::move(data);
    return t;
}

Tensor Tensor::from_complex(std::vector<std::size_t> shape, std::vector<cplx> data) {
    check_extents(shape);
    if (numel_of(shape) != data.size())
        throw ShapeError("data length " + std::to_string(data.size()) +
                         " does not match product of extents " +
                         std::to_string(numel_of(shape)));
    Tensor t;
    t.shape_ = std::move(shape);
    t.dtype_ = Dtype::c64;
    t.cdata_ = std::move(data);
    t.rdata_.clear();
    return t;
}

Tensor Tensor::scalar(double v) { return from_real({}, {v}); }
Tensor Tensor::scalar(cplx v) { return from_complex({}, {v}); }

Tensor Tensor::ones(std::vector<std::size_t> shape, Dtype dt) {
    Tensor t = zeros(std::move(shape), dt);
    if (dt == Dtype::f64)
        std::fill(t.rdata_.begin(), t.rdata_.end(), 1.0);
    else
        std::fill(t.cdata_.begin(), t.cdata_.end(), cplx(1.0, 0.0));
    return t;
}

Tensor Tensor::eye(std::size_t n, Dtype dt) {
    Tensor t = zeros({n, n}, dt);
    for (std::size_t i = 0; i < n; ++i) {
        if (dt == Dtype::f64)
            t.rdata_[i * n + i] = 1.0;
        else
            t.cdata_[i * n + i] = 1.0;
    }
    return t;
}

Tensor Tensor::random(std::vector<std::size_t> shape, Dtype dt, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t n = numel_of(shape);
    if (dt == Dtype::f64) {
        std::vector<double> data(n);
        for (double& v : data) v = u(rng);
        return from_real(std::move(shape), std::move(data));
    }
    std::vector<cplx> data(n);
    for (cplx& v : data) {
        double re = u(rng);
        double im = u(rng);
        v = cplx(re, im);
    }
    return from_complex(std::move(shape), std::move(data));
}

std::size_t Tensor::offset(std::span<const std::size_t> idx) const {
    std::size_t off = 0;
    std::size_t acc = 1;
    for (std::size_t d = shape_.size(); d-- > 0;) {
        off += idx[d] * acc;
        acc *= shape_[d];
    }
    return off;
}

Tensor Tensor::to_complex() const {
    if (dtype_ == Dtype::c64) return *this;
    std::vector<cplx> data(rdata_.size());
    for (std::size_t i = 0; i < rdata_.size(); ++i) data[i] = cplx(rdata_[i], 0.0);
    return from_complex(shape_, std::move(data));
}

Tensor Tensor::drop_negligible_imag(double atol) const {
    if (dtype_ == Dtype::f64) return *this;
    for (const cplx& v : cdata_)
        if (std::abs(v.imag()) > atol) return *this;
    std::vector<double> data(cdata_.size());
    for (std::size_t i = 0; i < cdata_.size(); ++i) data[i] = cdata_[i].real();
    return from_real(shape_, std::move(data));
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t d = 0; d < shape_.size(); ++d) {
        if (d) os << ',';
        os << shape_[d];
    }
    os << ']';
    return os.str();
}

double max_abs(const Tensor& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.at(i)));
    return m;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b))
        throw ShapeError("max_abs_diff: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.at(i) - b.at(i)));
    return m;
}

double relative_residual(const Tensor& a, const Tensor& b) {
    double denom = std::max(max_abs(a), max_abs(b));
    if (denom == 0.0) return 0.0;
    return max_abs_diff(a, b) / denom;
}

bool allclose(const Tensor& a, const Tensor& b, double rtol, double atol) {
    if (!a.same_shape(b)) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a.at(i) - b.at(i)) > atol + rtol * std::abs(b.at(i))) return false;
    return true;
}

} // namespace tcalc
