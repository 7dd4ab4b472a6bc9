#include "tcalc/mediators.hpp"

#include <cmath>
#include <numbers>

namespace tcalc {

static void check_cap(double entries, std::size_t cap, const char* what) {
    if (entries > static_cast<double>(cap))
        throw CapError(std::string(what) + ": dense materialization of " +
                       std::to_string(static_cast<unsigned long long>(entries)) +
                       " entries exceeds cap " + std::to_string(cap));
}

Tensor delta_dense(const DeltaSpec& spec, std::size_t cap) {
    if (spec.rank < 1) throw ShapeError("delta: rank must be >= 1");
    if (spec.dim < 1) throw ShapeError("delta: dim must be >= 1");
    check_cap(std::pow(static_cast<double>(spec.dim), static_cast<double>(spec.rank)), cap,
              "delta_dense");
    std::vector<std::size_t> shape(spec.rank, spec.dim);
    Tensor t = Tensor::zeros(shape);
    // flat offset of (i,i,...,i) is i * (D^(N-1) + ... + D + 1)
    std::size_t diag_stride = 0;
    for (std::size_t s : strides_of(shape)) diag_stride += s;
    for (std::size_t i = 0; i < spec.dim; ++i) t.rdata()[i * diag_stride] = 1.0;
    return t;
}

Tensor delta_dense(std::size_t rank, std::size_t dim, std::size_t cap) {
    return delta_dense(DeltaSpec{rank, dim}, cap);
}

Tensor gamma_dense(const GammaSpec& spec, std::size_t cap) {
    if (spec.input_dims.empty()) throw ShapeError("gamma: needs at least one input dim");
    for (std::size_t e : spec.input_dims)
        if (e < 1) throw ShapeError("gamma: extents must be >= 1");
    const std::size_t m_dim = spec.output_dim();
    check_cap(static_cast<double>(m_dim) * static_cast<double>(m_dim), cap, "gamma_dense");

    std::vector<std::size_t> shape = spec.input_dims;
    shape.push_back(m_dim);
    Tensor t = Tensor::zeros(shape);
    std::vector<std::size_t> row = strides_of(shape);
    // enumerate input multi-indices in serialization order m = 0..M-1
    // (first-index-fastest decode of m)
    for (std::size_t m = 0; m < m_dim; ++m) {
        std::size_t rem = m, off = 0;
        for (std::size_t d = 0; d < spec.input_dims.size(); ++d) {
            off += (rem % spec.input_dims[d]) * row[d];
            rem /= spec.input_dims[d];
        }
        t.rdata()[off + m * row.back()] = 1.0;
    }
    return t;
}

Tensor gamma_dense(const std::vector<std::size_t>& input_dims, std::size_t cap) {
    return gamma_dense(GammaSpec{input_dims}, cap);
}

Signature::Signature(int s1, int s2, int s3) : s_{s1, s2, s3} {
    for (int s : s_)
        if (s != 1 && s != -1) throw Error("signature signs must be +1 or -1");
    if (s_[0] == -1)
        for (int& s : s_) s = -s;
}

Signature Signature::parse(const std::string& text) {
    if (text.size() != 3)
        throw ParseError("signature must be exactly three of '+'/'-', got \"" + text + "\"");
    int s[3];
    for (std::size_t i = 0; i < 3; ++i) {
        if (text[i] == '+')
            s[i] = 1;
        else if (text[i] == '-')
            s[i] = -1;
        else
            throw ParseError("signature must be exactly three of '+'/'-', got \"" + text + "\"",
                             i);
    }
    return Signature(s[0], s[1], s[2]);
}

std::string Signature::str() const {
    std::string out;
    for (int s : s_) out += (s > 0 ? '+' : '-');
    return out;
}

Tensor chi_dense(const Signature& sig, std::size_t dim, std::size_t cap) {
    if (dim < 1) throw ShapeError("chi: dim must be >= 1");
    const double d = static_cast<double>(dim);
    check_cap(d * d * d, cap, "chi_dense");
    Tensor t = Tensor::zeros({dim, dim, dim});
    const long long D = static_cast<long long>(dim);
    for (long long i = 0; i < D; ++i)
        for (long long j = 0; j < D; ++j)
            for (long long k = 0; k < D; ++k) {
                long long s = sig.sign(0) * i + sig.sign(1) * j + sig.sign(2) * k;
                if (((s % D) + D) % D == 0)
                    t.rdata()[static_cast<std::size_t>((i * D + j) * D + k)] = 1.0;
            }
    return t;
}

Tensor fourier_matrix(const FourierSpec& spec) {
    if (spec.dim < 1) throw ShapeError("fourier: dim must be >= 1");
    const std::size_t D = spec.dim;
    const double sign = spec.direction == FourierDirection::forward ? -1.0 : 1.0;
    const double norm = 1.0 / std::sqrt(static_cast<double>(D));
    std::vector<cplx> data(D * D);
    for (std::size_t m = 0; m < D; ++m)
        for (std::size_t n = 0; n < D; ++n) {
            // reduce m*n mod D before multiplying: keeps the angle small
            const double phase =
                sign * 2.0 * std::numbers::pi * static_cast<double>((m * n) % D) /
                static_cast<double>(D);
            data[m * D + n] = norm * cplx(std::cos(phase), std::sin(phase));
        }
    return Tensor::from_complex({D, D}, std::move(data));
}

Tensor fourier_matrix(std::size_t dim, FourierDirection dir) {
    return fourier_matrix(FourierSpec{dim, dir});
}

static void check_square(const Tensor& a, const char* what) {
    if (a.rank() != 2 || a.shape()[0] != a.shape()[1])
        throw ShapeError(std::string(what) + ": requires a square matrix, got shape " +
                         a.shape_str());
}

Tensor diag_extract(const Tensor& a) {
    check_square(a, "diag_extract");
    const std::size_t d = a.shape()[0];
    Tensor out = Tensor::zeros({d}, a.dtype());
    for (std::size_t k = 0; k < d; ++k) {
        if (a.is_complex())
            out.cdata()[k] = a.cdata()[k * d + k];
        else
            out.rdata()[k] = a.rdata()[k * d + k];
    }
    return out;
}

Tensor diag_embed(const Tensor& v) {
    if (v.rank() != 1)
        throw ShapeError("diag_embed: requires rank 1, got rank " + std::to_string(v.rank()));
    const std::size_t d = v.shape()[0];
    Tensor out = Tensor::zeros({d, d}, v.dtype());
    for (std::size_t k = 0; k < d; ++k) {
        if (v.is_complex())
            out.cdata()[k * d + k] = v.cdata()[k];
        else
            out.rdata()[k * d + k] = v.rdata()[k];
    }
    return out;
}

Tensor zero_offdiag(const Tensor& a) {
    check_square(a, "zero_offdiag");
    return diag_embed(diag_extract(a));
}

Tensor trace(const Tensor& a) {
    check_square(a, "trace");
    const std::size_t d = a.shape()[0];
    if (a.is_complex()) {
        cplx sum = 0.0;
        for (std::size_t k = 0; k < d; ++k) sum += a.cdata()[k * d + k];
        return Tensor::scalar(sum);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < d; ++k) sum += a.rdata()[k * d + k];
    return Tensor::scalar(sum);
}

Tensor partial_trace(const Tensor& a, std::pair<std::size_t, std::size_t> axes) {
    if (a.rank() != 4)
        throw ShapeError("partial_trace: requires rank 4, got rank " + std::to_string(a.rank()));
    auto [p, q] = axes;
    if (p == q || p >= 4 || q >= 4) throw ShapeError("partial_trace: invalid axis pair");
    if (a.shape()[p] != a.shape()[q])
        throw ShapeError("partial_trace: traced axes have extents " +
                         std::to_string(a.shape()[p]) + " vs " + std::to_string(a.shape()[q]));

    std::vector<std::size_t> keep;
    for (std::size_t d = 0; d < 4; ++d)
        if (d != p && d != q) keep.push_back(d);
    const std::vector<std::size_t> st = strides_of(a.shape());
    const std::size_t e0 = a.shape()[keep[0]], e1 = a.shape()[keep[1]];
    const std::size_t dt = a.shape()[p];

    Tensor out = Tensor::zeros({e0, e1}, a.dtype());
    for (std::size_t x = 0; x < e0; ++x)
        for (std::size_t y = 0; y < e1; ++y) {
            const std::size_t base = x * st[keep[0]] + y * st[keep[1]];
            if (a.is_complex()) {
                cplx sum = 0.0;
                for (std::size_t i = 0; i < dt; ++i) sum += a.cdata()[base + i * (st[p] + st[q])];
                out.cdata()[x * e1 + y] = sum;
            } else {
                double sum = 0.0;
                for (std::size_t i = 0; i < dt; ++i) sum += a.rdata()[base + i * (st[p] + st[q])];
                out.rdata()[x * e1 + y] = sum;
            }
        }
    return out;
}

Tensor ones_tensor(const std::vector<std::size_t>& dims) {
    return Tensor::ones(dims);
}

} // namespace tcalc
