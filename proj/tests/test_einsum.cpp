#include <doctest.h>

#include <vector>

#include "tcalc/einsum.hpp"
#include "tcalc/mediators.hpp"
#include "tcalc/reference.hpp"
#include "test_util.hpp"

using namespace tcalc;

namespace {

std::vector<int> L(const std::string& s) {
    std::vector<int> out;
    for (char c : s) out.push_back(IndexSpec::label_of(c));
    return out;
}

} // namespace

TEST_CASE("einsum: identity times matrix") {
    Tensor b = Tensor::random({2, 3}, Dtype::f64, 5);
    Tensor out = einsum("ij,jk->ik", {Tensor::eye(2), b});
    CHECK(max_abs_diff(out, b) == 0.0);
}

TEST_CASE("einsum: iijk diagonal-and-sum with a single nonzero entry") {
    // A[i,i',j,k] = 1 iff i==i'==j==k==0; implicit output is (j,k)
    Tensor a = Tensor::zeros({2, 2, 2, 2});
    a.rdata()[0] = 1.0;
    Tensor out = einsum("iijk", {a});
    REQUIRE(out.shape() == std::vector<std::size_t>{2, 2});
    CHECK(out.at({0, 0}) == cplx(1.0, 0.0));
    CHECK(out.at({0, 1}) == cplx(0.0, 0.0));
    CHECK(out.at({1, 0}) == cplx(0.0, 0.0));
    CHECK(out.at({1, 1}) == cplx(0.0, 0.0));
}

TEST_CASE("einsum: outer product ikjl against the four-loop oracle") {
    Tensor a = Tensor::random({2, 2}, Dtype::f64, 11);
    Tensor b = Tensor::random({2, 2}, Dtype::f64, 12);
    Tensor out = einsum("ij,kl->ikjl", {a, b});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t l = 0; l < 2; ++l)
                    CHECK(out.at({i, k, j, l}) == a.at({i, j}) * b.at({k, l}));
}

TEST_CASE("contract_pair: dot with all-ones vector") {
    Tensor out = contract_pair(tt::vec({1, 2, 3}), L("i"), tt::vec({1, 1, 1}), L("i"), {});
    REQUIRE(out.rank() == 0);
    CHECK(out.rdata()[0] == 6.0);
}

TEST_CASE("contract_pair: identity chain") {
    Tensor out = contract_pair(Tensor::eye(2), L("ij"), Tensor::eye(2), L("jk"), L("ik"));
    CHECK(max_abs_diff(out, Tensor::eye(2)) == 0.0);
}

TEST_CASE("contract_pair: random matmul against the triple-loop oracle") {
    Tensor a = Tensor::random({3, 4}, Dtype::f64, 21);
    Tensor b = Tensor::random({4, 2}, Dtype::f64, 22);
    Tensor out = contract_pair(a, L("ij"), b, L("jk"), L("ik"));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 2; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < 4; ++j)
                acc += a.rdata()[i * 4 + j] * b.rdata()[j * 2 + k];
            CHECK(std::abs(out.rdata()[i * 2 + k] - acc) <= 1e-14 * std::abs(acc));
        }
}

TEST_CASE("contract_pair equals einsum_eval on two operands") {
    Tensor a = Tensor::random({3, 3}, Dtype::c64, 31);
    Tensor b = Tensor::random({3, 3}, Dtype::c64, 32);
    Tensor via_pair = contract_pair(a, L("ij"), b, L("jk"), L("ik"));
    Tensor via_eval = einsum("ij,jk->ik", {a, b});
    CHECK(max_abs_diff(via_pair, via_eval) == 0.0);
}

TEST_CASE("einsum matches the serial reference on randomized pair contractions") {
    struct Case {
        std::vector<std::size_t> sa, sb;
        std::string la, lb, lo;
    };
    const std::vector<Case> cases = {
        {{3, 4}, {4, 2}, "ij", "jk", "ik"},      {{2, 3, 4}, {4, 3}, "abc", "cb", "a"},
        {{3, 3}, {3}, "ii", "i", "i"},           {{2, 2, 3}, {3, 2}, "iij", "jk", "ik"},
        {{4}, {3}, "i", "j", "ji"},              {{2, 3}, {2, 3}, "ij", "ij", ""},
        {{3, 2, 3}, {3, 3}, "iji", "ik", "jk"},
    };
    std::uint64_t seed = 100;
    for (const auto& c : cases) {
        for (Dtype dt : {Dtype::f64, Dtype::c64}) {
            Tensor a = Tensor::random(c.sa, dt, seed++);
            Tensor b = Tensor::random(c.sb, dt, seed++);
            Tensor got = contract_pair(a, L(c.la), b, L(c.lb), L(c.lo));
            Tensor want = ref::contract_pair(a, L(c.la), b, L(c.lb), L(c.lo));
            CHECK(relative_residual(got, want) < 1e-13);
        }
    }
}

TEST_CASE("einsum is multilinear in each operand") {
    const double alpha = 1.7;
    Tensor a = Tensor::random({3, 4}, Dtype::c64, 41);
    Tensor b = Tensor::random({3, 4}, Dtype::c64, 42);
    Tensor c = Tensor::random({4, 3}, Dtype::c64, 43);

    Tensor scaled = Tensor::zeros({3, 4}, Dtype::c64);
    for (std::size_t i = 0; i < a.size(); ++i)
        scaled.cdata()[i] = alpha * a.cdata()[i] + b.cdata()[i];

    Tensor lhs = einsum("ij,jk->ik", {scaled, c});
    Tensor fa = einsum("ij,jk->ik", {a, c});
    Tensor fb = einsum("ij,jk->ik", {b, c});
    Tensor rhs = Tensor::zeros({3, 3}, Dtype::c64);
    for (std::size_t i = 0; i < rhs.size(); ++i)
        rhs.cdata()[i] = alpha * fa.cdata()[i] + fb.cdata()[i];
    CHECK(relative_residual(lhs, rhs) < 1e-12);
}

TEST_CASE("contraction order does not change the value") {
    Tensor a = Tensor::random({2, 5}, Dtype::c64, 51);
    Tensor b = Tensor::random({5, 3}, Dtype::c64, 52);
    Tensor c = Tensor::random({3, 4}, Dtype::c64, 53);

    Tensor engine = einsum("ab,bc,cd->ad", {a, b, c});
    Tensor left = contract_pair(contract_pair(a, L("ab"), b, L("bc"), L("ac")), L("ac"), c,
                                L("cd"), L("ad"));
    Tensor right = contract_pair(a, L("ab"),
                                 contract_pair(b, L("bc"), c, L("cd"), L("bd")), L("bd"),
                                 L("ad"));
    CHECK(relative_residual(engine, left) < 1e-12);
    CHECK(relative_residual(left, right) < 1e-12);
}

TEST_CASE("mixed real/complex operands promote to complex") {
    Tensor a = Tensor::random({2, 2}, Dtype::f64, 61);
    Tensor b = Tensor::random({2, 2}, Dtype::c64, 62);
    CHECK(einsum("ij,jk->ik", {a, b}).is_complex());
    CHECK(!einsum("ij,jk->ik", {a, a}).is_complex());
}

TEST_CASE("einsum error paths name the offender") {
    Tensor a = Tensor::random({2, 3}, Dtype::f64, 71);
    Tensor b = Tensor::random({4, 2}, Dtype::f64, 72);
    CHECK_THROWS_WITH_AS(einsum("ij,jk->ik", {a, b}),
                         doctest::Contains("extent mismatch for label 'j'"), ShapeError);
    CHECK_THROWS_WITH_AS(einsum("ij,jk->iq", {a, Tensor::random({3, 2}, Dtype::f64, 73)}),
                         doctest::Contains("unknown output label"), ShapeError);
    CHECK_THROWS_AS(einsum_eval(IndexSpec::parse("ij"), {}), ShapeError);
    CHECK_THROWS_AS(einsum("ijk", {a}), ShapeError); // rank mismatch
}

TEST_CASE("diagonal output embedding: i->ii") {
    Tensor v = tt::vec({2, 0, 5});
    Tensor out = einsum("i->ii", {v});
    CHECK(max_abs_diff(out, diag_embed(v)) == 0.0);
}

TEST_CASE("repeated-output einsum against dense delta contraction") {
    // out_{jk} = v_i delta_{ijk} is the same embedding "i->jk via delta"
    Tensor v = Tensor::random({4}, Dtype::f64, 81);
    Tensor via_delta = einsum("i,ijk->jk", {v, delta_dense(3, 4)});
    Tensor via_output = einsum("i->ii", {v});
    CHECK(max_abs_diff(via_delta, via_output) == 0.0);
}

TEST_CASE("budget is enforced before work is done") {
    Tensor a = Tensor::random({20, 20}, Dtype::f64, 91);
    EvalOptions opts;
    opts.budget = 10.0;
    CHECK_THROWS_AS(einsum("ij,jk->ik", {a, a}, opts), BudgetError);
}

TEST_CASE("transpose: definition and involution") {
    Tensor a = tt::mat({{1, 2, 3}, {4, 5, 6}});
    Tensor t = transpose(a, {1, 0});
    REQUIRE(t.shape() == std::vector<std::size_t>{3, 2});
    CHECK(t.at({2, 0}) == cplx(3.0, 0.0));
    CHECK(t.at({0, 1}) == cplx(4.0, 0.0));

    CHECK(max_abs_diff(transpose(Tensor::eye(4), {1, 0}), Tensor::eye(4)) == 0.0);

    Tensor r = Tensor::random({2, 3, 4, 5}, Dtype::f64, 101);
    Tensor twice = transpose(transpose(r, {2, 3, 0, 1}), {2, 3, 0, 1});
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(twice.rdata()[i] == r.rdata()[i]);
}

TEST_CASE("transpose rejects invalid permutations") {
    Tensor a = Tensor::random({2, 3}, Dtype::f64, 111);
    CHECK_THROWS_AS(transpose(a, {0, 0}), ShapeError);
    CHECK_THROWS_AS(transpose(a, {0}), ShapeError);
    CHECK_THROWS_AS(transpose(a, {0, 2}), ShapeError);
}

TEST_CASE("vectorize_col: first index fastest") {
    CHECK(max_abs_diff(vectorize_col(tt::mat({{1, 2}, {3, 4}})), tt::vec({1, 3, 2, 4})) == 0.0);

    Tensor col = Tensor::random({5, 1}, Dtype::f64, 121);
    Tensor v = vectorize_col(col);
    for (std::size_t i = 0; i < 5; ++i) CHECK(v.rdata()[i] == col.rdata()[i]);
}

TEST_CASE("vectorize_col equals the gamma contraction") {
    Tensor a = Tensor::random({3, 4}, Dtype::f64, 131);
    Tensor via_gamma = einsum("ij,ijm->m", {a, gamma_dense({3, 4})});
    CHECK(max_abs_diff(vectorize_col(a), via_gamma) == 0.0);
}

TEST_CASE("vectorize_row: rows concatenated") {
    CHECK(max_abs_diff(vectorize_row(tt::mat({{1, 2}, {3, 4}})), tt::vec({1, 2, 3, 4})) == 0.0);

    Tensor sym = tt::mat({{1, 2}, {2, 5}});
    CHECK(max_abs_diff(vectorize_row(sym), vectorize_col(sym)) == 0.0);

    Tensor a = Tensor::random({4, 2}, Dtype::f64, 141);
    CHECK(max_abs_diff(vectorize_row(a), vectorize_col(transpose(a, {1, 0}))) == 0.0);
}

TEST_CASE("devectorize inverts vectorization") {
    CHECK(max_abs_diff(devectorize(tt::vec({1, 3, 2, 4}), {2, 2}), tt::mat({{1, 2}, {3, 4}})) ==
          0.0);

    Tensor v6 = Tensor::random({6}, Dtype::f64, 151);
    CHECK(max_abs_diff(devectorize(v6, {6}), v6) == 0.0);

    Tensor v24 = Tensor::random({24}, Dtype::f64, 152);
    Tensor cube = devectorize(v24, {2, 3, 4});
    CHECK(max_abs_diff(gamma_order_flatten(cube), v24) == 0.0);

    Tensor a = Tensor::random({3, 5}, Dtype::c64, 153);
    Tensor round = devectorize(vectorize_col(a), {3, 5});
    CHECK(max_abs_diff(round, a) == 0.0);

    CHECK_THROWS_AS(devectorize(v6, {4}), ShapeError);
    CHECK_THROWS_AS(devectorize(tt::mat({{1, 2}, {3, 4}}), {2, 2}), ShapeError);
}
