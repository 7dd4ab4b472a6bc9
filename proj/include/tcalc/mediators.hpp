#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tcalc/tensor.hpp"

namespace tcalc {

/// Default dense materialization cap, in entries.
inline constexpr std::size_t kDefaultDenseCap = 100'000'000;

/// Rank-N Kronecker tensor of extent D: 1 iff all indices are equal.
struct DeltaSpec {
    std::size_t rank;
    std::size_t dim;
};

/// Vectorization tensor: rank N+1, entry (i1..iN, m) is 1 iff
/// m = i1 + i2*I1 + i3*I1*I2 + ... (first listed index fastest).
struct GammaSpec {
    std::vector<std::size_t> input_dims;
    std::size_t output_dim() const {
        std::size_t m = 1;
        for (std::size_t e : input_dims) m *= e;
        return m;
    }
};

/// Ordered sign triple of the convolution tensor. A global sign flip leaves
/// chi unchanged, so signatures are canonicalized to s1 = +1 on
/// construction; the four canonical values are +++, ++-, +-+, +--.
class Signature {
public:
    Signature(int s1, int s2, int s3);

    /// Parse "++-" and friends; exactly three of '+'/'-'.
    static Signature parse(const std::string& text);

    int sign(std::size_t wire) const { return s_[wire]; } // wire 0,1,2
    std::string str() const;

    bool operator==(const Signature&) const = default;

private:
    std::array<int, 3> s_;
};

enum class FourierDirection { forward, inverse };

struct FourierSpec {
    std::size_t dim;
    FourierDirection direction = FourierDirection::forward;
};

Tensor delta_dense(const DeltaSpec& spec, std::size_t cap = kDefaultDenseCap);
Tensor delta_dense(std::size_t rank, std::size_t dim, std::size_t cap = kDefaultDenseCap);

Tensor gamma_dense(const GammaSpec& spec, std::size_t cap = kDefaultDenseCap);
Tensor gamma_dense(const std::vector<std::size_t>& input_dims,
                   std::size_t cap = kDefaultDenseCap);

/// Rank-3 D x D x D tensor: 1 iff s1*i + s2*j + s3*k == 0 (mod D).
Tensor chi_dense(const Signature& sig, std::size_t dim, std::size_t cap = kDefaultDenseCap);

/// Unitary DFT matrix F[m,n] = exp(-2*pi*i*m*n/D)/sqrt(D); the inverse
/// direction is its conjugate.
Tensor fourier_matrix(const FourierSpec& spec);
Tensor fourier_matrix(std::size_t dim, FourierDirection dir = FourierDirection::forward);

/// out[k] = a[k,k].
Tensor diag_extract(const Tensor& a);

/// out[j,k] = v[j] when j == k, else 0; inverse of diag_extract on its image.
Tensor diag_embed(const Tensor& v);

/// Keep the diagonal, zero everything else.
Tensor zero_offdiag(const Tensor& a);

/// Sum of the diagonal, as a rank-0 tensor.
Tensor trace(const Tensor& a);

/// Trace out two equal-extent axes of a rank-4 tensor; remaining axes keep
/// their order. Default traces the first two: out[k,l] = sum_i a[i,i,k,l].
Tensor partial_trace(const Tensor& a, std::pair<std::size_t, std::size_t> axes = {0, 1});

/// Constant tensor of ones (outer product of rank-1 delta vectors).
Tensor ones_tensor(const std::vector<std::size_t>& dims);

} // namespace tcalc
