#include "tcalc/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tcalc/parallel.hpp"
#include "tcalc/products.hpp"

namespace tcalc {

namespace detail {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, in place, unnormalized.
void fft_pow2(std::vector<cplx>& x, bool inverse) {
    const std::size_t n = x.size();
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    const double dir = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = dir * 2.0 * std::numbers::pi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx w(std::cos(ang * static_cast<double>(j)),
                             std::sin(ang * static_cast<double>(j)));
                const cplx u = x[i + j];
                const cplx v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
            }
        }
    }
}

// Bluestein chirp c_n = exp(-i*pi*n^2/D), with n^2 reduced mod 2D so the
// angle stays small.
cplx chirp(std::size_t n, std::size_t d) {
    const unsigned long long nn = (static_cast<unsigned long long>(n) * n) %
                                  (2ull * static_cast<unsigned long long>(d));
    const double ang = -std::numbers::pi * static_cast<double>(nn) / static_cast<double>(d);
    return {std::cos(ang), std::sin(ang)};
}

std::vector<cplx> fft_bluestein(const std::vector<cplx>& x) {
    const std::size_t d = x.size();
    std::size_t m = 1;
    while (m < 2 * d - 1) m <<= 1;

    std::vector<cplx> u(m, cplx(0.0, 0.0));
    std::vector<cplx> v(m, cplx(0.0, 0.0));
    for (std::size_t n = 0; n < d; ++n) {
        const cplx c = chirp(n, d);
        u[n] = x[n] * c;
        v[n] = std::conj(c);
        if (n > 0) v[m - n] = std::conj(c);
    }
    fft_pow2(u, false);
    fft_pow2(v, false);
    for (std::size_t i = 0; i < m; ++i) u[i] *= v[i];
    fft_pow2(u, true);
    const double inv_m = 1.0 / static_cast<double>(m);

    std::vector<cplx> out(d);
    for (std::size_t k = 0; k < d; ++k) out[k] = chirp(k, d) * u[k] * inv_m;
    return out;
}

} // namespace

std::vector<cplx> fft_any(std::vector<cplx> x, bool inverse) {
    if (x.size() <= 1) return x;
    if (inverse) {
        for (cplx& c : x) c = std::conj(c);
        x = fft_any(std::move(x), false);
        for (cplx& c : x) c = std::conj(c);
        return x;
    }
    if (is_pow2(x.size())) {
        fft_pow2(x, false);
        return x;
    }
    return fft_bluestein(x);
}

} // namespace detail

namespace {

std::size_t mod_index(long long v, long long d) {
    return static_cast<std::size_t>(((v % d) + d) % d);
}

std::vector<cplx> as_cvec(const Tensor& t) {
    std::vector<cplx> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = t.at(i);
    return v;
}

// Direct evaluation of out[k] = sum_{ij} chi_{ijk} b_i a_j: for each (j, k)
// the chi condition pins i = -s1*(s2*j + s3*k) mod D, so the sum is a
// single loop over j. Quadratic overall, never materializes chi.
template <typename T>
void conv_direct_kernel(const T* a, const T* b, T* out, long long d, const Signature& sig) {
    const long long s1 = sig.sign(0), s2 = sig.sign(1), s3 = sig.sign(2);
    par::for_n(
        static_cast<std::size_t>(d),
        [&](std::size_t k) {
            T acc{};
            for (long long j = 0; j < d; ++j) {
                const std::size_t i =
                    mod_index(-s1 * (s2 * j + s3 * static_cast<long long>(k)), d);
                acc += a[j] * b[i];
            }
            out[k] = acc;
        },
        std::max<std::size_t>(1, par::kGrain / static_cast<std::size_t>(d)));
}

Tensor conv1d_direct(const Tensor& a, const Tensor& b, const Signature& sig) {
    const std::size_t d = a.shape()[0];
    if (!a.is_complex() && !b.is_complex()) {
        Tensor out = Tensor::zeros({d});
        conv_direct_kernel<double>(a.rdata(), b.rdata(), out.rdata(),
                                   static_cast<long long>(d), sig);
        return out;
    }
    const Tensor ac = a.to_complex();
    const Tensor bc = b.to_complex();
    Tensor out = Tensor::zeros({d}, Dtype::c64);
    conv_direct_kernel<cplx>(ac.cdata(), bc.cdata(), out.cdata(), static_cast<long long>(d),
                             sig);
    return out;
}

// FFT path from the generalized convolution theorem, using unnormalized
// transforms: out = U3[(U1 b) o (U2 a)] / D with U_w the inverse transform
// on '+' wires and the forward transform on '-' wires.
Tensor conv1d_fft(const Tensor& a, const Tensor& b, const Signature& sig,
                  const ConvOptions& opts) {
    const std::size_t d = a.shape()[0];
    std::vector<cplx> ta = detail::fft_any(as_cvec(a), sig.sign(1) > 0);
    std::vector<cplx> tb = detail::fft_any(as_cvec(b), sig.sign(0) > 0);
    for (std::size_t i = 0; i < d; ++i) ta[i] *= tb[i];
    ta = detail::fft_any(std::move(ta), sig.sign(2) > 0);
    const double inv_d = 1.0 / static_cast<double>(d);
    for (cplx& c : ta) c *= inv_d;
    Tensor out = Tensor::from_complex({d}, std::move(ta));
    if (!a.is_complex() && !b.is_complex()) return out.drop_negligible_imag(opts.imag_drop_atol);
    return out;
}

void check_vectors(const Tensor& a, const Tensor& b, const char* op) {
    if (a.rank() != 1 || b.rank() != 1)
        throw ShapeError(std::string(op) + ": operands must be vectors, got shapes " +
                         a.shape_str() + " and " + b.shape_str());
    if (a.shape()[0] != b.shape()[0])
        throw ShapeError(std::string(op) + ": extent mismatch, " +
                         std::to_string(a.shape()[0]) + " vs " + std::to_string(b.shape()[0]));
}

} // namespace

Tensor conv1d(const Tensor& a, const Tensor& b, const Signature& sig, const ConvOptions& opts) {
    check_vectors(a, b, "conv1d");
    const std::size_t d = a.shape()[0];
    ConvPath path = opts.path;
    if (path == ConvPath::automatic)
        path = d >= opts.fft_threshold ? ConvPath::fft : ConvPath::direct;
    return path == ConvPath::fft ? conv1d_fft(a, b, sig, opts) : conv1d_direct(a, b, sig);
}

Tensor conv_nd(const Tensor& a, const Tensor& b, const std::vector<AxisConv>& axes,
               const ConvOptions& opts) {
    if (a.shape() != b.shape())
        throw ShapeError("conv_nd: shape mismatch, " + a.shape_str() + " vs " + b.shape_str());
    if (axes.size() != a.rank())
        throw ShapeError("conv_nd: " + std::to_string(axes.size()) + " axis specs for rank " +
                         std::to_string(a.rank()));
    for (std::size_t w = 0; w < axes.size(); ++w)
        if (axes[w].extent != a.shape()[w])
            throw ShapeError("conv_nd: axis " + std::to_string(w) + " extent " +
                             std::to_string(axes[w].extent) + " does not match shape " +
                             a.shape_str());
    const std::size_t n = a.size();
    if (a.rank() == 0) {
        // degenerate scalar case: single product
        if (!a.is_complex() && !b.is_complex())
            return Tensor::scalar(a.rdata()[0] * b.rdata()[0]);
        return Tensor::scalar(a.at(0) * b.at(0));
    }

    ConvPath path = opts.path;
    if (path == ConvPath::automatic)
        path = static_cast<double>(n) * static_cast<double>(n) <= double(1 << 24)
                   ? ConvPath::direct
                   : ConvPath::fft;

    if (path == ConvPath::direct) {
        const auto& shape = a.shape();
        const std::size_t r = a.rank();
        const Tensor ac = a.to_complex();
        const Tensor bc = b.to_complex();
        Tensor out = Tensor::zeros(shape, Dtype::c64);
        par::for_n(
            n,
            [&](std::size_t kflat) {
                std::vector<std::size_t> k(r);
                std::size_t rem = kflat;
                for (std::size_t w = r; w-- > 0;) {
                    k[w] = rem % shape[w];
                    rem /= shape[w];
                }
                cplx acc = 0.0;
                for (std::size_t iflat = 0; iflat < n; ++iflat) {
                    // chi on each axis pins a's index from b's index and k
                    std::size_t irem = iflat, jflat = 0, axis_stride = 1;
                    for (std::size_t w = r; w-- > 0;) {
                        const long long dw = static_cast<long long>(shape[w]);
                        const long long iw = static_cast<long long>(irem % shape[w]);
                        irem /= shape[w];
                        const Signature& s = axes[w].signature;
                        const std::size_t jw = mod_index(
                            -s.sign(1) *
                                (s.sign(0) * iw + s.sign(2) * static_cast<long long>(k[w])),
                            dw);
                        jflat += jw * axis_stride;
                        axis_stride *= shape[w];
                    }
                    acc += bc.cdata()[iflat] * ac.cdata()[jflat];
                }
                out.cdata()[kflat] = acc;
            },
            std::max<std::size_t>(1, par::kGrain / n));
        if (!a.is_complex() && !b.is_complex())
            return out.drop_negligible_imag(opts.imag_drop_atol);
        return out;
    }

    // FFT path: transform every axis of both operands per the axis signs,
    // multiply entrywise, transform back along every axis, divide by the
    // total extent product.
    std::vector<cplx> ta = as_cvec(a);
    std::vector<cplx> tb = as_cvec(b);
    const auto shape = a.shape();
    auto transform_axis = [&](std::vector<cplx>& data, std::size_t axis, bool inverse) {
        const std::size_t len = shape[axis];
        std::size_t inner = 1;
        for (std::size_t w = axis + 1; w < shape.size(); ++w) inner *= shape[w];
        const std::size_t outer = data.size() / (len * inner);
        std::vector<cplx> line(len);
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t in = 0; in < inner; ++in) {
                const std::size_t base = o * len * inner + in;
                for (std::size_t l = 0; l < len; ++l) line[l] = data[base + l * inner];
                line = detail::fft_any(std::move(line), inverse);
                for (std::size_t l = 0; l < len; ++l) data[base + l * inner] = line[l];
            }
    };
    double total = 1.0;
    for (std::size_t w = 0; w < shape.size(); ++w) {
        transform_axis(ta, w, axes[w].signature.sign(1) > 0);
        transform_axis(tb, w, axes[w].signature.sign(0) > 0);
        total *= static_cast<double>(shape[w]);
    }
    for (std::size_t f = 0; f < ta.size(); ++f) ta[f] *= tb[f];
    for (std::size_t w = 0; w < shape.size(); ++w)
        transform_axis(ta, w, axes[w].signature.sign(2) > 0);
    const double inv_total = 1.0 / total;
    for (cplx& c : ta) c *= inv_total;
    Tensor out = Tensor::from_complex(shape, std::move(ta));
    if (!a.is_complex() && !b.is_complex()) return out.drop_negligible_imag(opts.imag_drop_atol);
    return out;
}

Tensor dft(const Tensor& v, FourierDirection dir) {
    if (v.rank() != 1)
        throw ShapeError("dft: operand must be a vector, got shape " + v.shape_str());
    const std::size_t d = v.shape()[0];
    std::vector<cplx> x = detail::fft_any(as_cvec(v), dir == FourierDirection::inverse);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (cplx& c : x) c *= norm;
    return Tensor::from_complex({d}, std::move(x));
}

Tensor conv1d_linear(const Tensor& a, const Tensor& b, const ConvOptions& opts) {
    if (a.rank() != 1 || b.rank() != 1)
        throw ShapeError("conv1d_linear: operands must be vectors");
    const std::size_t m = a.shape()[0] + b.shape()[0] - 1;
    auto pad = [&](const Tensor& t) {
        Tensor p = Tensor::zeros({m}, t.dtype());
        for (std::size_t i = 0; i < t.shape()[0]; ++i) {
            if (t.is_complex())
                p.cdata()[i] = t.cdata()[i];
            else
                p.rdata()[i] = t.rdata()[i];
        }
        return p;
    };
    return conv1d(pad(a), pad(b), Signature(1, 1, -1), opts);
}

TheoremReport check_conv_theorem(const Tensor& a, const Tensor& b, const Signature& sig) {
    check_vectors(a, b, "check_conv_theorem");
    const std::size_t d = a.shape()[0];
    ConvOptions direct;
    direct.path = ConvPath::direct;
    const Tensor lhs = conv1d(a, b, sig, direct).to_complex();

    auto apply = [&](const Tensor& v, int sign) {
        return dft(v, sign > 0 ? FourierDirection::forward : FourierDirection::inverse);
    };
    Tensor prod = hadamard(apply(b, sig.sign(0)), apply(a, sig.sign(1)));
    Tensor rhs = apply(prod, sig.sign(2));
    const double scale = std::sqrt(static_cast<double>(d));
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs.cdata()[i] *= scale;

    return TheoremReport{sig, d, max_abs_diff(lhs, rhs)};
}

} // namespace tcalc
