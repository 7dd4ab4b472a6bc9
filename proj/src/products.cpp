#include "tcalc/products.hpp"

#include <algorithm>

#include "tcalc/einsum.hpp"
#include "tcalc/mediators.hpp"
#include "tcalc/parallel.hpp"

namespace tcalc {

namespace {

void need_rank2(const Tensor& t, const char* op) {
    if (t.rank() != 2)
        throw ShapeError(std::string(op) + ": operand must be a matrix, got shape " +
                         t.shape_str());
}

// Promote the pair to a common scalar kind and run the matching kernel.
template <class Kernel>
Tensor binary_op(const Tensor& a, const Tensor& b, std::vector<std::size_t> out_shape,
                 Kernel&& kernel) {
    if (!a.is_complex() && !b.is_complex()) {
        Tensor out = Tensor::zeros(std::move(out_shape), Dtype::f64);
        kernel(a.rdata(), b.rdata(), out.rdata());
        return out;
    }
    Tensor atmp, btmp;
    const Tensor* ap = &a;
    const Tensor* bp = &b;
    if (!a.is_complex()) {
        atmp = a.to_complex();
        ap = &atmp;
    }
    if (!b.is_complex()) {
        btmp = b.to_complex();
        bp = &btmp;
    }
    Tensor out = Tensor::zeros(std::move(out_shape), Dtype::c64);
    kernel(ap->cdata(), bp->cdata(), out.cdata());
    return out;
}

std::size_t grain_for(std::size_t per_iter_work) {
    return std::max<std::size_t>(1, par::kGrain / std::max<std::size_t>(per_iter_work, 1));
}

} // namespace

Tensor dot(const Tensor& a, const Tensor& b) {
    need_rank2(a, "dot");
    need_rank2(b, "dot");
    if (a.shape()[1] != b.shape()[0])
        throw ShapeError("dot: inner extents differ, " + std::to_string(a.shape()[1]) + " vs " +
                         std::to_string(b.shape()[0]));
    const std::size_t I = a.shape()[0], J = a.shape()[1], K = b.shape()[1];
    return binary_op(a, b, {I, K}, [&](const auto* ad, const auto* bd, auto* od) {
        par::for_n(
            I,
            [&](std::size_t i) {
                auto* orow = od + i * K;
                for (std::size_t j = 0; j < J; ++j) {
                    const auto av = ad[i * J + j];
                    const auto* brow = bd + j * K;
                    for (std::size_t k = 0; k < K; ++k) orow[k] += av * brow[k];
                }
            },
            grain_for(J * K));
    });
}

Tensor tensor_product(const Tensor& a, const Tensor& b) {
    need_rank2(a, "tensor_product");
    need_rank2(b, "tensor_product");
    const std::size_t I = a.shape()[0], J = a.shape()[1];
    const std::size_t K = b.shape()[0], L = b.shape()[1];
    return binary_op(a, b, {I, J, K, L}, [&](const auto* ad, const auto* bd, auto* od) {
        par::for_n(
            I * J,
            [&](std::size_t ij) {
                const auto av = ad[ij];
                auto* block = od + ij * K * L;
                for (std::size_t kl = 0; kl < K * L; ++kl) block[kl] = av * bd[kl];
            },
            grain_for(K * L));
    });
}

Tensor kronecker(const Tensor& a, const Tensor& b, KronLayout layout) {
    need_rank2(a, "kronecker");
    need_rank2(b, "kronecker");
    const std::size_t I = a.shape()[0], J = a.shape()[1];
    const std::size_t K = b.shape()[0], L = b.shape()[1];
    const std::size_t ncols = J * L;
    const bool textbook = layout == KronLayout::textbook;
    return binary_op(a, b, {I * K, J * L}, [&](const auto* ad, const auto* bd, auto* od) {
        par::for_n(
            I * K,
            [&](std::size_t m) {
                const std::size_t i = textbook ? m / K : m % I;
                const std::size_t k = textbook ? m % K : m / I;
                const auto* arow = ad + i * J;
                const auto* brow = bd + k * L;
                auto* orow = od + m * ncols;
                if (textbook) {
                    for (std::size_t j = 0; j < J; ++j) {
                        const auto av = arow[j];
                        auto* seg = orow + j * L;
                        for (std::size_t l = 0; l < L; ++l) seg[l] = av * brow[l];
                    }
                } else {
                    for (std::size_t l = 0; l < L; ++l) {
                        const auto bv = brow[l];
                        auto* seg = orow + l * J;
                        for (std::size_t j = 0; j < J; ++j) seg[j] = arow[j] * bv;
                    }
                }
            },
            grain_for(ncols));
    });
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
    if (a.shape() != b.shape())
        throw ShapeError("hadamard: shape mismatch, " + a.shape_str() + " vs " + b.shape_str());
    const std::size_t n = a.size();
    return binary_op(a, b, a.shape(), [&](const auto* ad, const auto* bd, auto* od) {
        par::for_n(n, [&](std::size_t f) { od[f] = ad[f] * bd[f]; });
    });
}

Tensor khatri_rao_col(const Tensor& a, const Tensor& b) {
    need_rank2(a, "khatri_rao_col");
    need_rank2(b, "khatri_rao_col");
    if (a.shape()[1] != b.shape()[1])
        throw ShapeError("khatri_rao_col: column counts differ, " +
                         std::to_string(a.shape()[1]) + " vs " + std::to_string(b.shape()[1]));
    const std::size_t I = a.shape()[0], J = a.shape()[1], K = b.shape()[0];
    return binary_op(a, b, {I * K, J}, [&](const auto* ad, const auto* bd, auto* od) {
        par::for_n(
            I * K,
            [&](std::size_t m) {
                const std::size_t i = m % I;
                const std::size_t k = m / I;
                auto* orow = od + m * J;
                for (std::size_t j = 0; j < J; ++j) orow[j] = ad[i * J + j] * bd[k * J + j];
            },
            grain_for(J));
    });
}

Tensor khatri_rao_row(const Tensor& a, const Tensor& b) {
    need_rank2(a, "khatri_rao_row");
    need_rank2(b, "khatri_rao_row");
    if (a.shape()[0] != b.shape()[0])
        throw ShapeError("khatri_rao_row: row counts differ, " + std::to_string(a.shape()[0]) +
                         " vs " + std::to_string(b.shape()[0]));
    const std::size_t I = a.shape()[0], J = a.shape()[1], L = b.shape()[1];
    return binary_op(a, b, {I, J * L}, [&](const auto* ad, const auto* bd, auto* od) {
        par::for_n(
            I,
            [&](std::size_t i) {
                auto* orow = od + i * J * L;
                for (std::size_t l = 0; l < L; ++l) {
                    const auto bv = bd[i * L + l];
                    auto* seg = orow + l * J;
                    for (std::size_t j = 0; j < J; ++j) seg[j] = ad[i * J + j] * bv;
                }
            },
            grain_for(J * L));
    });
}

Tensor tracy_singh(const Tensor& a, const Tensor& b) {
    if (a.rank() != 4 || b.rank() != 4)
        throw ShapeError("tracy_singh: operands must be rank 4 (block matrices), got shapes " +
                         a.shape_str() + " and " + b.shape_str());
    const std::size_t I = a.shape()[0], J = a.shape()[1], K = a.shape()[2], L = a.shape()[3];
    const std::size_t P = b.shape()[0], Q = b.shape()[1], R = b.shape()[2], S = b.shape()[3];
    const std::size_t ncols = J * Q * L * S;
    return binary_op(a, b, {I * P * K * R, ncols}, [&](const auto* ad, const auto* bd, auto* od) {
        par::for_n(
            I * P * K * R,
            [&](std::size_t m) {
                // m = i + p*I + k*I*P + r*I*P*K
                std::size_t rem = m;
                const std::size_t i = rem % I;
                rem /= I;
                const std::size_t p = rem % P;
                rem /= P;
                const std::size_t k = rem % K;
                const std::size_t r = rem / K;
                auto* orow = od + m * ncols;
                // n = j + q*J + l*J*Q + s*J*Q*L, written in ascending order
                std::size_t n = 0;
                for (std::size_t s = 0; s < S; ++s)
                    for (std::size_t l = 0; l < L; ++l)
                        for (std::size_t q = 0; q < Q; ++q) {
                            const auto bv = bd[((p * Q + q) * R + r) * S + s];
                            for (std::size_t j = 0; j < J; ++j, ++n)
                                orow[n] = ad[((i * J + j) * K + k) * L + l] * bv;
                        }
            },
            grain_for(ncols));
    });
}

// ---------------------------------------------------------------------------
// Mediator-contraction reference paths
// ---------------------------------------------------------------------------

namespace mediated {

Tensor dot(const Tensor& a, const Tensor& b) {
    need_rank2(a, "dot");
    need_rank2(b, "dot");
    return einsum("ij,kl,jk->il", {a, b, delta_dense(2, a.shape()[1])});
}

Tensor tensor_product(const Tensor& a, const Tensor& b) {
    need_rank2(a, "tensor_product");
    need_rank2(b, "tensor_product");
    return einsum("ij,kl->ijkl", {a, b});
}

Tensor kronecker(const Tensor& a, const Tensor& b) {
    need_rank2(a, "kronecker");
    need_rank2(b, "kronecker");
    return einsum("ij,kl,ikm,jln->mn",
                  {a, b, gamma_dense({a.shape()[0], b.shape()[0]}),
                   gamma_dense({a.shape()[1], b.shape()[1]})});
}

Tensor hadamard(const Tensor& a, const Tensor& b) {
    need_rank2(a, "hadamard");
    need_rank2(b, "hadamard");
    return einsum("ij,kl,ikm,jln->mn",
                  {a, b, delta_dense(3, a.shape()[0]), delta_dense(3, a.shape()[1])});
}

Tensor khatri_rao_col(const Tensor& a, const Tensor& b) {
    need_rank2(a, "khatri_rao_col");
    need_rank2(b, "khatri_rao_col");
    return einsum("ij,kl,ikm,jln->mn",
                  {a, b, gamma_dense({a.shape()[0], b.shape()[0]}),
                   delta_dense(3, a.shape()[1])});
}

Tensor khatri_rao_row(const Tensor& a, const Tensor& b) {
    need_rank2(a, "khatri_rao_row");
    need_rank2(b, "khatri_rao_row");
    return einsum("ij,kl,ikm,jln->mn",
                  {a, b, delta_dense(3, a.shape()[0]),
                   gamma_dense({a.shape()[1], b.shape()[1]})});
}

Tensor tracy_singh(const Tensor& a, const Tensor& b) {
    if (a.rank() != 4 || b.rank() != 4)
        throw ShapeError("tracy_singh: operands must be rank 4");
    return einsum("ijkl,pqrs,ipkrm,jqlsn->mn",
                  {a, b,
                   gamma_dense({a.shape()[0], b.shape()[0], a.shape()[2], b.shape()[2]}),
                   gamma_dense({a.shape()[1], b.shape()[1], a.shape()[3], b.shape()[3]})});
}

} // namespace mediated

} // namespace tcalc
