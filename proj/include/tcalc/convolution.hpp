#pragma once

#include <vector>

#include "tcalc/mediators.hpp"
#include "tcalc/tensor.hpp"

namespace tcalc {

/// Per-axis convolution choice for conv_nd.
struct AxisConv {
    Signature signature;
    std::size_t extent;
};

enum class ConvPath { automatic, direct, fft };

struct ConvOptions {
    ConvPath path = ConvPath::automatic;
    /// The automatic 1-D path switches to FFT at this extent.
    std::size_t fft_threshold = 32;
    /// Real inputs whose result carries imaginary parts at or below this
    /// absolute bound come back as real tensors; larger imaginary parts
    /// are reported as complex output rather than silently dropped.
    double imag_drop_atol = 1e-10;
};

/// Signed circular convolution of two equal-length vectors:
/// out[k] = sum_{ij} chi^{sig}_{ijk} b[i] a[j].
/// For (++-) this is the conventional circular convolution
/// sum_i a[i] b[(k-i) mod D]; for (+--) it is the circular
/// cross-correlation sum_i a[i] b[(k+i) mod D].
Tensor conv1d(const Tensor& a, const Tensor& b, const Signature& sig,
              const ConvOptions& opts = {});

/// N-D signed circular convolution, one chi per axis. Operands must share
/// one shape and supply one AxisConv per axis. The all-(++-) matrix case is
/// the usual double-sum circular convolution.
Tensor conv_nd(const Tensor& a, const Tensor& b, const std::vector<AxisConv>& axes,
               const ConvOptions& opts = {});

/// Unitary DFT of a vector (fast transform; any length).
Tensor dft(const Tensor& v, FourierDirection dir = FourierDirection::forward);

/// Zero-padded linear convolution, built by padding to D1+D2-1 and running
/// the circular (++-) path.
Tensor conv1d_linear(const Tensor& a, const Tensor& b, const ConvOptions& opts = {});

/// One instance of the generalized convolution theorem: with P_w = F on '+'
/// wires and F^{-1} on '-' wires, conv1d(a,b,sig) == sqrt(D) *
/// P3[(P1 b) o (P2 a)]. For (++-) this is F(a*b) == sqrt(D)(Fa o Fb).
struct TheoremReport {
    Signature signature;
    std::size_t extent;
    double residual; // max-abs deviation between the two sides
};

TheoremReport check_conv_theorem(const Tensor& a, const Tensor& b, const Signature& sig);

namespace detail {

/// Unnormalized DFT of any length (radix-2 when possible, Bluestein
/// otherwise). Forward kernel exp(-2*pi*i*n*k/D); inverse is its conjugate
/// without the 1/D factor.
std::vector<cplx> fft_any(std::vector<cplx> x, bool inverse);

} // namespace detail

} // namespace tcalc
