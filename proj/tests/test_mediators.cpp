#include <doctest.h>

#include <cmath>

#include "tcalc/einsum.hpp"
#include "tcalc/mediators.hpp"
#include "tcalc/products.hpp"
#include "test_util.hpp"

using namespace tcalc;

namespace {

std::size_t count_ones(const Tensor& t) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const cplx v = t.at(i);
        if (v == cplx(1.0, 0.0))
            ++n;
        else if (v != cplx(0.0, 0.0))
            return static_cast<std::size_t>(-1); // not a 0/1 tensor
    }
    return n;
}

} // namespace

TEST_CASE("delta_dense basics") {
    CHECK(max_abs_diff(delta_dense(2, 3), Tensor::eye(3)) == 0.0);
    CHECK(max_abs_diff(delta_dense(1, 4), tt::vec({1, 1, 1, 1})) == 0.0);

    // exactly D ones for every rank
    for (std::size_t rank = 1; rank <= 4; ++rank)
        for (std::size_t dim = 1; dim <= 6; ++dim)
            CHECK(count_ones(delta_dense(rank, dim)) == dim);
}

TEST_CASE("delta contraction collapses to a smaller delta") {
    Tensor lhs = einsum("ijk,jk->i", {delta_dense(3, 2), delta_dense(2, 2)});
    CHECK(max_abs_diff(lhs, tt::vec({1, 1})) == 0.0);
}

TEST_CASE("delta contractions over shared wires give deltas of leftover rank") {
    // all rank combinations <= 4 at D <= 4, joined over one wire
    for (std::size_t ra = 2; ra <= 4; ++ra)
        for (std::size_t rb = 2; rb <= 4; ++rb)
            for (std::size_t d = 1; d <= 4; ++d) {
                if (ra + rb - 2 > 4) continue;
                std::vector<int> la, lb, lo;
                int next = 0;
                for (std::size_t k = 0; k + 1 < ra; ++k) la.push_back(next++);
                for (std::size_t k = 0; k + 1 < rb; ++k) lb.push_back(next++);
                la.push_back(99);
                lb.push_back(99);
                lo = la;
                lo.pop_back();
                for (std::size_t k = 0; k + 1 < rb; ++k) lo.push_back(lb[k]);
                Tensor got = contract_pair(delta_dense(ra, d), la, delta_dense(rb, d), lb, lo);
                CHECK(max_abs_diff(got, delta_dense(ra + rb - 2, d)) == 0.0);
            }
}

TEST_CASE("delta materialization cap") {
    CHECK_THROWS_AS(delta_dense(8, 100, 1000), CapError);
}

TEST_CASE("gamma_dense: serialization order, identity case") {
    Tensor g = gamma_dense({2, 2});
    REQUIRE(g.shape() == std::vector<std::size_t>{2, 2, 4});
    CHECK(g.at({0, 0, 0}) == cplx(1.0, 0.0));
    CHECK(g.at({1, 0, 1}) == cplx(1.0, 0.0));
    CHECK(g.at({0, 1, 2}) == cplx(1.0, 0.0));
    CHECK(g.at({1, 1, 3}) == cplx(1.0, 0.0));
    CHECK(count_ones(g) == 4);

    CHECK(max_abs_diff(gamma_dense({5}), Tensor::eye(5)) == 0.0);
}

TEST_CASE("gamma pair over the flat wire is a product of identities") {
    Tensor got = einsum("abm,cdm->abcd", {gamma_dense({2, 3}), gamma_dense({2, 3})});
    Tensor expect = Tensor::zeros({2, 3, 2, 3});
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            expect.rdata()[((a * 3 + b) * 2 + a) * 3 + b] = 1.0;
    CHECK(max_abs_diff(got, expect) == 0.0);
}

TEST_CASE("gamma pair over all input wires is the flat identity") {
    Tensor got = einsum("abm,abn->mn", {gamma_dense({2, 3}), gamma_dense({2, 3})});
    CHECK(max_abs_diff(got, Tensor::eye(6)) == 0.0);
}

TEST_CASE("delta/gamma swap: dense equality of both sides") {
    // delta(N+1, M) on N gamma copies == per-input deltas into one gamma
    for (const auto& dims : {std::vector<std::size_t>{2, 2}, std::vector<std::size_t>{2, 3}}) {
        for (std::size_t n = 2; n <= 3; ++n) {
            const std::size_t m = dims[0] * dims[1];
            const Tensor gam = gamma_dense(dims);
            const Tensor del = delta_dense(n + 1, m);

            Tensor lhs, rhs;
            if (n == 2) {
                lhs = einsum("abm,cdn,mne->abcde", {gam, gam, del});
                rhs = einsum("acx,bdy,xye->abcde",
                             {delta_dense(3, dims[0]), delta_dense(3, dims[1]),
                              gamma_dense(dims)});
            } else {
                lhs = einsum("abm,cdn,efo,mnop->abcdefp", {gam, gam, gam, del});
                rhs = einsum("acex,bdfy,xyp->abcdefp",
                             {delta_dense(4, dims[0]), delta_dense(4, dims[1]),
                              gamma_dense(dims)});
            }
            CHECK(max_abs_diff(lhs, rhs) == 0.0);
        }
    }
}

TEST_CASE("chi_dense: definition cases") {
    Tensor c = chi_dense(Signature::parse("++-"), 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                CHECK(c.at({i, j, k}) == cplx(k == (i + j) % 2 ? 1.0 : 0.0, 0.0));

    // at D=2 the +++ and ++- tensors coincide (-1 == 1 mod 2)
    CHECK(max_abs_diff(chi_dense(Signature::parse("+++"), 2),
                       chi_dense(Signature::parse("++-"), 2)) == 0.0);
}

TEST_CASE("chi_dense (+--) membership at D=3") {
    Tensor c = chi_dense(Signature::parse("+--"), 3);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) {
                const bool member = i == (j + k) % 3;
                CHECK(c.at({i, j, k}) == cplx(member ? 1.0 : 0.0, 0.0));
                if (member) ++ones;
            }
    CHECK(ones == 9);
}

TEST_CASE("chi_dense has exactly D^2 ones; global sign flip is a symmetry") {
    const char* sigs[] = {"+++", "++-", "+-+", "+--"};
    for (const char* s : sigs)
        for (std::size_t d = 1; d <= 8; ++d)
            CHECK(count_ones(chi_dense(Signature::parse(s), d)) == d * d);

    // (-,-,+) canonicalizes to (+,+,-) and materializes identically
    CHECK(Signature(-1, -1, 1) == Signature::parse("++-"));
    CHECK(Signature(-1, -1, 1).str() == "++-");
}

TEST_CASE("signature parsing rejects malformed input") {
    CHECK_THROWS_AS(Signature::parse("++"), ParseError);
    CHECK_THROWS_AS(Signature::parse("+*-"), ParseError);
    CHECK_THROWS_AS(Signature::parse("+++-"), ParseError);
}

TEST_CASE("fourier_matrix: small cases and unitarity") {
    CHECK(max_abs_diff(fourier_matrix(1), Tensor::from_real({1, 1}, {1.0})) == 0.0);

    const double s = 1.0 / std::sqrt(2.0);
    Tensor f2 = fourier_matrix(2);
    CHECK(relative_residual(f2, Tensor::from_real({2, 2}, {s, s, s, -s})) < 1e-15);

    for (std::size_t d : {2, 3, 8, 17, 64}) {
        Tensor f = fourier_matrix(d);
        Tensor fh = Tensor::zeros({d, d}, Dtype::c64);
        for (std::size_t m = 0; m < d; ++m)
            for (std::size_t n = 0; n < d; ++n)
                fh.cdata()[m * d + n] = std::conj(f.cdata()[n * d + m]);
        CHECK(max_abs_diff(dot(f, fh), Tensor::eye(d)) < 1e-12);
        // the inverse direction is the conjugate transpose
        CHECK(max_abs_diff(fourier_matrix(d, FourierDirection::inverse), fh) == 0.0);
    }
}

TEST_CASE("chi conjugated by per-sign Fourier matrices is sqrt(D) delta") {
    const char* sigs[] = {"+++", "++-", "+-+", "+--"};
    for (const char* s : sigs) {
        const Signature sig = Signature::parse(s);
        for (std::size_t d = 2; d <= 16; ++d) {
            std::vector<Tensor> ops{chi_dense(sig, d)};
            for (std::size_t w = 0; w < 3; ++w)
                ops.push_back(fourier_matrix(
                    d, sig.sign(w) > 0 ? FourierDirection::forward : FourierDirection::inverse));
            Tensor got = einsum("ijk,ia,jb,kc->abc", ops);
            Tensor want = delta_dense(3, d).to_complex();
            const double scale = std::sqrt(static_cast<double>(d));
            for (std::size_t f = 0; f < want.size(); ++f) want.cdata()[f] *= scale;
            CHECK(max_abs_diff(got, want) < 1e-9);
        }
    }
}

TEST_CASE("diag_extract / diag_embed / zero_offdiag / trace") {
    CHECK(max_abs_diff(diag_extract(Tensor::eye(3)), tt::vec({1, 1, 1})) == 0.0);
    CHECK(max_abs_diff(diag_extract(tt::mat({{1, 2}, {3, 4}})), tt::vec({1, 4})) == 0.0);

    CHECK(max_abs_diff(diag_embed(tt::vec({1, 1})), Tensor::eye(2)) == 0.0);
    CHECK(max_abs_diff(diag_embed(tt::vec({2, 0, 5})),
                       tt::mat({{2, 0, 0}, {0, 0, 0}, {0, 0, 5}})) == 0.0);

    Tensor d5 = Tensor::random({5, 5}, Dtype::f64, 11);
    CHECK(max_abs_diff(diag_extract(d5), einsum("ij,ijk->k", {d5, delta_dense(3, 5)})) == 0.0);

    Tensor v4 = Tensor::random({4}, Dtype::f64, 12);
    CHECK(max_abs_diff(diag_embed(v4), einsum("i,ijk->jk", {v4, delta_dense(3, 4)})) == 0.0);
    CHECK(max_abs_diff(diag_extract(diag_embed(v4)), v4) == 0.0);

    Tensor diag = diag_embed(tt::vec({3, 7}));
    CHECK(max_abs_diff(zero_offdiag(diag), diag) == 0.0);
    CHECK(max_abs_diff(zero_offdiag(tt::mat({{1, 2}, {3, 4}})), tt::mat({{1, 0}, {0, 4}})) ==
          0.0);
    Tensor r4 = Tensor::random({4, 4}, Dtype::f64, 13);
    CHECK(max_abs_diff(zero_offdiag(r4), einsum("ij,ijkl->kl", {r4, delta_dense(4, 4)})) == 0.0);

    CHECK(trace(Tensor::eye(5)).rdata()[0] == 5.0);
    CHECK(trace(tt::mat({{1, 2}, {3, 4}})).rdata()[0] == 5.0);
    Tensor r6 = Tensor::random({6, 6}, Dtype::f64, 14);
    double want = 0.0;
    for (std::size_t k = 0; k < 6; ++k) want += r6.rdata()[k * 6 + k];
    CHECK(trace(r6).rdata()[0] == doctest::Approx(want).epsilon(1e-14));

    CHECK_THROWS_AS(diag_extract(Tensor::random({2, 3}, Dtype::f64, 15)), ShapeError);
    CHECK_THROWS_AS(trace(Tensor::random({2, 3}, Dtype::f64, 16)), ShapeError);
}

TEST_CASE("partial_trace") {
    // (identity (x) B) traced over the first pair gives 2 B
    Tensor b = Tensor::random({2, 2}, Dtype::f64, 21);
    Tensor prod = einsum("ij,kl->ijkl", {Tensor::eye(2), b});
    Tensor traced = partial_trace(prod);
    Tensor want = Tensor::zeros({2, 2});
    for (std::size_t f = 0; f < 4; ++f) want.rdata()[f] = 2.0 * b.rdata()[f];
    CHECK(max_abs_diff(traced, want) == 0.0);

    // a[i,j,k,l] = delta_ij delta_kl -> out = 2 delta_kl
    Tensor a = einsum("ij,kl->ijkl", {Tensor::eye(2), Tensor::eye(2)});
    Tensor got = partial_trace(a);
    Tensor expect = Tensor::zeros({2, 2});
    expect.rdata()[0] = expect.rdata()[3] = 2.0;
    CHECK(max_abs_diff(got, expect) == 0.0);

    // general axes against a loop oracle
    Tensor r = Tensor::random({3, 3, 2, 2}, Dtype::f64, 22);
    Tensor pt = partial_trace(r, {0, 1});
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) {
            double acc = 0.0;
            for (std::size_t i = 0; i < 3; ++i) acc += r.at({i, i, k, l}).real();
            CHECK(pt.at({k, l}).real() == doctest::Approx(acc).epsilon(1e-14));
        }

    CHECK_THROWS_AS(partial_trace(Tensor::random({3, 2, 2, 2}, Dtype::f64, 23), {0, 1}),
                    ShapeError);
}

TEST_CASE("ones_tensor is the Hadamard identity element") {
    CHECK(max_abs_diff(ones_tensor({3}), tt::vec({1, 1, 1})) == 0.0);
    CHECK(max_abs_diff(ones_tensor({2, 2}), tt::mat({{1, 1}, {1, 1}})) == 0.0);

    // outer product of rank-1 deltas
    CHECK(max_abs_diff(ones_tensor({2, 3}),
                       einsum("i,j->ij", {delta_dense(1, 2), delta_dense(1, 3)})) == 0.0);

    Tensor a = Tensor::random({2, 3}, Dtype::f64, 31);
    CHECK(max_abs_diff(hadamard(a, ones_tensor({2, 3})), a) == 0.0);
}

TEST_CASE("mediators accept D = 1") {
    CHECK(delta_dense(3, 1).size() == 1);
    CHECK(chi_dense(Signature::parse("++-"), 1).rdata()[0] == 1.0);
    CHECK(gamma_dense({1, 1}).size() == 1);
    CHECK(fourier_matrix(1).at(std::size_t{0}) == cplx(1.0, 0.0));
}
