#include "tcalc/reference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace tcalc::ref {

namespace {

// Imaginary parts are exactly zero when every input was real, so the
// demotion below loses nothing.
Tensor demote_if(const Tensor& c, bool want_real) {
    if (!want_real) return c;
    std::vector<double> re(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) re[i] = c.cdata()[i].real();
    return Tensor::from_real(c.shape(), std::move(re));
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ShapeError("ref: " + msg);
}

} // namespace

Tensor contract_pair(const Tensor& a, const std::vector<int>& a_labels, const Tensor& b,
                     const std::vector<int>& b_labels, const std::vector<int>& out_labels) {
    require(a_labels.size() == a.rank() && b_labels.size() == b.rank(),
            "label count must match rank");

    std::map<int, std::size_t> ext;
    for (std::size_t d = 0; d < a_labels.size(); ++d) ext[a_labels[d]] = a.shape()[d];
    for (std::size_t d = 0; d < b_labels.size(); ++d) {
        auto [it, fresh] = ext.emplace(b_labels[d], b.shape()[d]);
        require(fresh || it->second == b.shape()[d], "extent mismatch");
    }
    for (int l : out_labels) require(ext.count(l) != 0, "unknown output label");

    std::vector<int> all;
    std::vector<std::size_t> all_ext;
    for (const auto& [l, e] : ext) {
        all.push_back(l);
        all_ext.push_back(e);
    }
    auto pos_of = [&](int l) {
        return static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), l) -
                                        all.begin());
    };

    std::vector<std::size_t> out_shape;
    for (int l : out_labels) out_shape.push_back(ext.at(l));

    const Tensor ac = a.to_complex();
    const Tensor bc = b.to_complex();
    Tensor out = Tensor::zeros(out_shape, Dtype::c64);

    const auto sa = strides_of(a.shape());
    const auto sb = strides_of(b.shape());
    const auto so = strides_of(out_shape);

    // walk the full joint index space, accumulating into the output
    std::size_t total = 1;
    for (std::size_t e : all_ext) total *= e;
    std::vector<std::size_t> idx(all.size(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (std::size_t d = all.size(); d-- > 0;) {
            idx[d] = rem % all_ext[d];
            rem /= all_ext[d];
        }
        std::size_t ao = 0, bo = 0, oo = 0;
        for (std::size_t d = 0; d < a_labels.size(); ++d) ao += idx[pos_of(a_labels[d])] * sa[d];
        for (std::size_t d = 0; d < b_labels.size(); ++d) bo += idx[pos_of(b_labels[d])] * sb[d];
        for (std::size_t d = 0; d < out_labels.size(); ++d)
            oo += idx[pos_of(out_labels[d])] * so[d];
        out.cdata()[oo] += ac.cdata()[ao] * bc.cdata()[bo];
    }
    return demote_if(out, !a.is_complex() && !b.is_complex());
}

Tensor dot(const Tensor& a, const Tensor& b) {
    require(a.rank() == 2 && b.rank() == 2 && a.shape()[1] == b.shape()[0],
            "dot needs IxJ and JxK");
    const std::size_t I = a.shape()[0], J = a.shape()[1], K = b.shape()[1];
    Tensor out = Tensor::zeros({I, K}, Dtype::c64);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t k = 0; k < K; ++k) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < J; ++j) acc += a.at(i * J + j) * b.at(j * K + k);
            out.cdata()[i * K + k] = acc;
        }
    return demote_if(out, !a.is_complex() && !b.is_complex());
}

Tensor tensor_product(const Tensor& a, const Tensor& b) {
    require(a.rank() == 2 && b.rank() == 2, "tensor_product needs two matrices");
    const std::size_t I = a.shape()[0], J = a.shape()[1];
    const std::size_t K = b.shape()[0], L = b.shape()[1];
    Tensor out = Tensor::zeros({I, J, K, L}, Dtype::c64);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t k = 0; k < K; ++k)
                for (std::size_t l = 0; l < L; ++l)
                    out.cdata()[((i * J + j) * K + k) * L + l] =
                        a.at(i * J + j) * b.at(k * L + l);
    return demote_if(out, !a.is_complex() && !b.is_complex());
}

Tensor kronecker(const Tensor& a, const Tensor& b) {
    require(a.rank() == 2 && b.rank() == 2, "kronecker needs two matrices");
    const std::size_t I = a.shape()[0], J = a.shape()[1];
    const std::size_t K = b.shape()[0], L = b.shape()[1];
    Tensor out = Tensor::zeros({I * K, J * L}, Dtype::c64);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t k = 0; k < K; ++k)
                for (std::size_t l = 0; l < L; ++l) {
                    const std::size_t m = i + k * I;
                    const std::size_t n = j + l * J;
                    out.cdata()[m * (J * L) + n] = a.at(i * J + j) * b.at(k * L + l);
                }
    return demote_if(out, !a.is_complex() && !b.is_complex());
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
    require(a.shape() == b.shape(), "hadamard needs equal shapes");
    Tensor out = Tensor::zeros(a.shape(), Dtype::c64);
    for (std::size_t f = 0; f < a.size(); ++f) out.cdata()[f] = a.at(f) * b.at(f);
    return demote_if(out, !a.is_complex() && !b.is_complex());
}

Tensor khatri_rao_col(const Tensor& a, const Tensor& b) {
    require(a.rank() == 2 && b.rank() == 2 && a.shape()[1] == b.shape()[1],
            "khatri_rao_col needs matching column counts");
    const std::size_t I = a.shape()[0], J = a.shape()[1], K = b.shape()[0];
    Tensor out = Tensor::zeros({I * K, J}, Dtype::c64);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t j = 0; j < J; ++j)
                out.cdata()[(i + k * I) * J + j] = a.at(i * J + j) * b.at(k * J + j);
    return demote_if(out, !a.is_complex() && !b.is_complex());
}

Tensor khatri_rao_row(const Tensor& a, const Tensor& b) {
    require(a.rank() == 2 && b.rank() == 2 && a.shape()[0] == b.shape()[0],
            "khatri_rao_row needs matching row counts");
    const std::size_t I = a.shape()[0], J = a.shape()[1], L = b.shape()[1];
    Tensor out = Tensor::zeros({I, J * L}, Dtype::c64);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t l = 0; l < L; ++l)
                out.cdata()[i * (J * L) + (j + l * J)] = a.at(i * J + j) * b.at(i * L + l);
    return demote_if(out, !a.is_complex() && !b.is_complex());
}

Tensor tracy_singh(const Tensor& a, const Tensor& b) {
    require(a.rank() == 4 && b.rank() == 4, "tracy_singh needs two rank-4 tensors");
    const std::size_t I = a.shape()[0], J = a.shape()[1], K = a.shape()[2], L = a.shape()[3];
    const std::size_t P = b.shape()[0], Q = b.shape()[1], R = b.shape()[2], S = b.shape()[3];
    Tensor out = Tensor::zeros({I * P * K * R, J * Q * L * S}, Dtype::c64);
    const std::size_t ncols = J * Q * L * S;
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t k = 0; k < K; ++k)
                for (std::size_t l = 0; l < L; ++l)
                    for (std::size_t p = 0; p < P; ++p)
                        for (std::size_t q = 0; q < Q; ++q)
                            for (std::size_t r = 0; r < R; ++r)
                                for (std::size_t s = 0; s < S; ++s) {
                                    const std::size_t m =
                                        i + p * I + k * I * P + r * I * P * K;
                                    const std::size_t n =
                                        j + q * J + l * J * Q + s * J * Q * L;
                                    out.cdata()[m * ncols + n] =
                                        a.at(((i * J + j) * K + k) * L + l) *
                                        b.at(((p * Q + q) * R + r) * S + s);
                                }
    return demote_if(out, !a.is_complex() && !b.is_complex());
}

Tensor conv1d(const Tensor& a, const Tensor& b, const Signature& sig) {
    require(a.rank() == 1 && b.rank() == 1 && a.shape()[0] == b.shape()[0],
            "conv1d needs two vectors of equal extent");
    const long long D = static_cast<long long>(a.shape()[0]);
    Tensor out = Tensor::zeros({a.shape()[0]}, Dtype::c64);
    // membership test over the chi definition; b rides the first chi wire,
    // a the second
    for (long long k = 0; k < D; ++k) {
        cplx acc = 0.0;
        for (long long i = 0; i < D; ++i)
            for (long long j = 0; j < D; ++j) {
                long long s = sig.sign(0) * i + sig.sign(1) * j + sig.sign(2) * k;
                if (((s % D) + D) % D == 0)
                    acc += b.at(static_cast<std::size_t>(i)) * a.at(static_cast<std::size_t>(j));
            }
        out.cdata()[static_cast<std::size_t>(k)] = acc;
    }
    return demote_if(out, !a.is_complex() && !b.is_complex());
}

Tensor dft(const Tensor& v, FourierDirection dir) {
    require(v.rank() == 1, "dft needs a vector");
    const std::size_t D = v.shape()[0];
    const double sign = dir == FourierDirection::forward ? -1.0 : 1.0;
    const double norm = 1.0 / std::sqrt(static_cast<double>(D));
    Tensor out = Tensor::zeros({D}, Dtype::c64);
    for (std::size_t m = 0; m < D; ++m) {
        cplx acc = 0.0;
        for (std::size_t n = 0; n < D; ++n) {
            const double phase = sign * 2.0 * std::numbers::pi *
                                 static_cast<double>((m * n) % D) / static_cast<double>(D);
            acc += cplx(std::cos(phase), std::sin(phase)) * v.at(n);
        }
        out.cdata()[m] = norm * acc;
    }
    return out;
}

} // namespace tcalc::ref
