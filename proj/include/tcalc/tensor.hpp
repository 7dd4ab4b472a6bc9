#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tcalc/errors.hpp"

namespace tcalc {

using cplx = std::complex<double>;

enum class Dtype { f64, c64 };

/// Dense N-rank tensor of f64 or c64 scalars, row-major (last index fastest).
///
/// Tensors are immutable by convention once built: every operation in the
/// library returns a fresh tensor, so values can be shared freely across
/// threads. Rank 0 (shape == {}) is a scalar with one element.
class Tensor {
public:
    Tensor() : shape_{}, dtype_(Dtype::f64), rdata_(1, 0.0) {}

    static Tensor zeros(std::vector<std::size_t> shape, Dtype dt = Dtype::f64);
    static Tensor from_real(std::vector<std::size_t> shape, std::vector<double> data);
    static Tensor from_complex(std::vector<std::size_t> shape, std::vector<cplx> data);
    static Tensor scalar(double v);
    static Tensor scalar(cplx v);
    /// All entries 1.
    static Tensor ones(std::vector<std::size_t> shape, Dtype dt = Dtype::f64);
    /// Identity matrix.
    static Tensor eye(std::size_t n, Dtype dt = Dtype::f64);
    /// Deterministic pseudo-random tensor, entries uniform in [0,1)
    /// (independently for re and im when complex).
    static Tensor random(std::vector<std::size_t> shape, Dtype dt, std::uint64_t seed);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return dtype_ == Dtype::f64 ? rdata_.size() : cdata_.size(); }
    Dtype dtype() const { return dtype_; }
    bool is_complex() const { return dtype_ == Dtype::c64; }

    double* rdata() { return rdata_.data(); }
    const double* rdata() const { return rdata_.data(); }
    cplx* cdata() { return cdata_.data(); }
    const cplx* cdata() const { return cdata_.data(); }

    /// Element at flat offset, promoted to complex.
    cplx at(std::size_t flat) const {
        return dtype_ == Dtype::f64 ? cplx(rdata_[flat], 0.0) : cdata_[flat];
    }

    /// Row-major flat offset of a multi-index (no bounds check on values).
    std::size_t offset(std::span<const std::size_t> idx) const;

    cplx at(std::initializer_list<std::size_t> idx) const {
        return at(offset(std::span<const std::size_t>(idx.begin(), idx.size())));
    }

    /// Complex copy of this tensor (identity if already complex).
    Tensor to_complex() const;

    /// If every imaginary part is below atol in absolute value, the real
    /// part as an f64 tensor; otherwise *this unchanged.
    Tensor drop_negligible_imag(double atol) const;

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

    std::string shape_str() const;

private:
    std::vector<std::size_t> shape_;
    Dtype dtype_;
    std::vector<double> rdata_; // f64 payload
    std::vector<cplx> cdata_;   // c64 payload
};

/// Row-major strides (last axis stride 1). Empty shape -> empty strides.
std::vector<std::size_t> strides_of(const std::vector<std::size_t>& shape);

/// Product of extents; 1 for rank 0.
std::size_t numel_of(const std::vector<std::size_t>& shape);

/// Largest absolute entry.
double max_abs(const Tensor& a);

/// max_k |a_k - b_k|; shapes must match.
double max_abs_diff(const Tensor& a, const Tensor& b);

/// max-abs deviation relative to the max magnitude of both sides
/// (0 when both sides are identically zero).
double relative_residual(const Tensor& a, const Tensor& b);

/// Entrywise closeness: |a-b| <= atol + rtol*|b| with the library default
/// comparison tolerance (relative 1e-10, absolute floor 1e-12).
bool allclose(const Tensor& a, const Tensor& b, double rtol = 1e-10, double atol = 1e-12);

} // namespace tcalc
