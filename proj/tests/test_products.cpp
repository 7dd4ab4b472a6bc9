#include <doctest.h>

#include "tcalc/einsum.hpp"
#include "tcalc/mediators.hpp"
#include "tcalc/products.hpp"
#include "tcalc/reference.hpp"
#include "test_util.hpp"

using namespace tcalc;

TEST_CASE("dot: basics and loop oracle") {
    Tensor b = Tensor::random({2, 3}, Dtype::f64, 1);
    CHECK(max_abs_diff(dot(Tensor::eye(2), b), b) == 0.0);

    Tensor nil = tt::mat({{0, 1}, {0, 0}});
    CHECK(max_abs(dot(nil, nil)) == 0.0);

    Tensor x = Tensor::random({3, 4}, Dtype::f64, 2);
    Tensor y = Tensor::random({4, 2}, Dtype::f64, 3);
    CHECK(relative_residual(dot(x, y), ref::dot(x, y)) < 1e-14);

    CHECK_THROWS_WITH_AS(dot(x, x), doctest::Contains("inner extents differ"), ShapeError);
}

TEST_CASE("tensor_product: axis order (i,j,k,l)") {
    Tensor b = Tensor::random({2, 3}, Dtype::f64, 4);
    Tensor one = Tensor::from_real({1, 1}, {1.0});
    Tensor embedded = tensor_product(one, b);
    REQUIRE(embedded.shape() == std::vector<std::size_t>{1, 1, 2, 3});
    for (std::size_t f = 0; f < b.size(); ++f) CHECK(embedded.rdata()[f] == b.rdata()[f]);

    Tensor zero = Tensor::zeros({2, 2});
    CHECK(max_abs(tensor_product(zero, b)) == 0.0);

    Tensor x = Tensor::random({2, 2}, Dtype::f64, 5);
    Tensor y = Tensor::random({2, 2}, Dtype::f64, 6);
    CHECK(max_abs_diff(tensor_product(x, y), ref::tensor_product(x, y)) == 0.0);
}

TEST_CASE("kronecker: identity case and gamma ordering") {
    CHECK(max_abs_diff(kronecker(Tensor::eye(2), Tensor::eye(2)), Tensor::eye(4)) == 0.0);

    // column vectors: m = i + k*I makes the first operand's index fastest;
    // the gamma-contraction oracle is the authority for the ordering
    Tensor a = Tensor::from_real({2, 1}, {1, 0});
    Tensor b = Tensor::from_real({2, 1}, {3, 7});
    Tensor got = kronecker(a, b);
    Tensor via_gamma = mediated::kronecker(a, b);
    CHECK(max_abs_diff(got, via_gamma) == 0.0);
    CHECK(max_abs_diff(got, Tensor::from_real({4, 1}, {3, 0, 7, 0})) == 0.0);

    // textbook layout flips which operand varies fastest
    CHECK(max_abs_diff(kronecker(a, b, KronLayout::textbook),
                       Tensor::from_real({4, 1}, {3, 7, 0, 0})) == 0.0);

    Tensor x = Tensor::random({2, 3}, Dtype::f64, 7);
    Tensor y = Tensor::random({3, 2}, Dtype::f64, 8);
    CHECK(relative_residual(kronecker(x, y), mediated::kronecker(x, y)) < 1e-12);
}

TEST_CASE("textbook kronecker equals gamma kronecker with swapped operands") {
    Tensor x = Tensor::random({2, 3}, Dtype::c64, 9);
    Tensor y = Tensor::random({4, 2}, Dtype::c64, 10);
    CHECK(max_abs_diff(kronecker(x, y, KronLayout::textbook), kronecker(y, x)) == 0.0);
}

TEST_CASE("hadamard: identity element, zero, delta-mediated path") {
    Tensor a = Tensor::random({3, 3}, Dtype::f64, 11);
    CHECK(max_abs_diff(hadamard(a, ones_tensor({3, 3})), a) == 0.0);
    CHECK(max_abs(hadamard(a, Tensor::zeros({3, 3}))) == 0.0);
    CHECK(relative_residual(hadamard(a, a), mediated::hadamard(a, a)) < 1e-12);

    // any rank
    Tensor r3 = Tensor::random({2, 2, 2}, Dtype::f64, 12);
    CHECK(max_abs_diff(hadamard(r3, r3), ref::hadamard(r3, r3)) == 0.0);

    CHECK_THROWS_AS(hadamard(a, Tensor::random({3, 2}, Dtype::f64, 13)), ShapeError);
}

TEST_CASE("hadamard is commutative and associative (exact on integers)") {
    Tensor a = tt::mat({{1, -2}, {3, 4}});
    Tensor b = tt::mat({{5, 6}, {-7, 8}});
    Tensor c = tt::mat({{2, 0}, {1, -3}});
    CHECK(max_abs_diff(hadamard(a, b), hadamard(b, a)) == 0.0);
    CHECK(max_abs_diff(hadamard(hadamard(a, b), c), hadamard(a, hadamard(b, c))) == 0.0);
}

TEST_CASE("khatri_rao_col: per-column kronecker") {
    Tensor u = Tensor::from_real({2, 1}, {1, 2});
    Tensor v = Tensor::from_real({3, 1}, {4, 5, 6});
    CHECK(max_abs_diff(khatri_rao_col(u, v), kronecker(u, v)) == 0.0);

    Tensor ones_row = Tensor::ones({1, 3});
    Tensor b = Tensor::random({4, 3}, Dtype::f64, 14);
    CHECK(max_abs_diff(khatri_rao_col(ones_row, b), b) == 0.0);

    Tensor x = Tensor::random({2, 3}, Dtype::f64, 15);
    Tensor y = Tensor::random({4, 3}, Dtype::f64, 16);
    CHECK(relative_residual(khatri_rao_col(x, y), mediated::khatri_rao_col(x, y)) < 1e-12);

    CHECK_THROWS_WITH_AS(khatri_rao_col(x, Tensor::random({2, 2}, Dtype::f64, 17)),
                         doctest::Contains("column counts differ"), ShapeError);
}

TEST_CASE("khatri_rao_row: transpose-linked to the column version") {
    Tensor u = Tensor::from_real({1, 2}, {1, 2});
    Tensor v = Tensor::from_real({1, 3}, {4, 5, 6});
    CHECK(max_abs_diff(khatri_rao_row(u, v), kronecker(u, v)) == 0.0);

    Tensor a = Tensor::random({3, 2}, Dtype::f64, 18);
    Tensor b = Tensor::random({4, 2}, Dtype::f64, 19);
    CHECK(max_abs_diff(transpose(khatri_rao_col(a, b)),
                       khatri_rao_row(transpose(a), transpose(b))) == 0.0);

    Tensor x = Tensor::random({3, 2}, Dtype::f64, 20);
    Tensor y = Tensor::random({3, 4}, Dtype::f64, 21);
    CHECK(relative_residual(khatri_rao_row(x, y), mediated::khatri_rao_row(x, y)) < 1e-12);

    CHECK_THROWS_WITH_AS(khatri_rao_row(x, Tensor::random({2, 4}, Dtype::f64, 22)),
                         doctest::Contains("row counts differ"), ShapeError);
}

TEST_CASE("tracy_singh: degenerate and reduction cases") {
    // all extents 1: plain scalar product
    Tensor sa = Tensor::from_real({1, 1, 1, 1}, {3.0});
    Tensor sb = Tensor::from_real({1, 1, 1, 1}, {-2.0});
    Tensor s = tracy_singh(sa, sb);
    REQUIRE(s.shape() == std::vector<std::size_t>{1, 1});
    CHECK(s.rdata()[0] == -6.0);

    // unit outer extents reduce to the kronecker of the inner matrices
    Tensor ia = Tensor::random({1, 1, 2, 3}, Dtype::f64, 23);
    Tensor ib = Tensor::random({1, 1, 3, 2}, Dtype::f64, 24);
    Tensor inner_a = einsum("xyij->ij", {ia});
    Tensor inner_b = einsum("xyij->ij", {ib});
    CHECK(relative_residual(tracy_singh(ia, ib), kronecker(inner_a, inner_b)) < 1e-13);

    Tensor x = Tensor::random({2, 2, 2, 2}, Dtype::f64, 25);
    Tensor y = Tensor::random({2, 2, 2, 2}, Dtype::f64, 26);
    CHECK(relative_residual(tracy_singh(x, y), mediated::tracy_singh(x, y)) < 1e-12);

    CHECK_THROWS_AS(tracy_singh(Tensor::random({2, 2}, Dtype::f64, 27), y), ShapeError);
}

TEST_CASE("all six products: direct path equals mediator path on random complex input") {
    std::uint64_t seed = 1000;
    for (int trial = 0; trial < 25; ++trial) {
        auto ext = [&](std::uint64_t salt) {
            return 1 + (seed * 2654435761u + salt * 40503u) % 5;
        };
        const std::size_t I = ext(1), J = ext(2), K = ext(3), L = ext(4);
        ++seed;

        Tensor a = Tensor::random({I, J}, Dtype::c64, seed * 10 + 1);
        Tensor b = Tensor::random({J, K}, Dtype::c64, seed * 10 + 2);
        CHECK(relative_residual(dot(a, b), mediated::dot(a, b)) < 1e-12);

        Tensor c = Tensor::random({K, L}, Dtype::c64, seed * 10 + 3);
        CHECK(relative_residual(tensor_product(a, c), mediated::tensor_product(a, c)) < 1e-12);
        CHECK(relative_residual(kronecker(a, c), mediated::kronecker(a, c)) < 1e-12);

        Tensor h = Tensor::random({I, J}, Dtype::c64, seed * 10 + 4);
        CHECK(relative_residual(hadamard(a, h), mediated::hadamard(a, h)) < 1e-12);

        Tensor kc = Tensor::random({K, J}, Dtype::c64, seed * 10 + 5);
        CHECK(relative_residual(khatri_rao_col(a, kc), mediated::khatri_rao_col(a, kc)) < 1e-12);

        Tensor kr = Tensor::random({I, L}, Dtype::c64, seed * 10 + 6);
        CHECK(relative_residual(khatri_rao_row(a, kr), mediated::khatri_rao_row(a, kr)) < 1e-12);

        Tensor t1 = Tensor::random({I, J, K, L}, Dtype::c64, seed * 10 + 7);
        Tensor t2 = Tensor::random({L, K, J, I}, Dtype::c64, seed * 10 + 8);
        CHECK(relative_residual(tracy_singh(t1, t2), mediated::tracy_singh(t1, t2)) < 1e-12);
    }
}

TEST_CASE("products match the serial reference implementations") {
    Tensor a = Tensor::random({3, 4}, Dtype::c64, 2001);
    Tensor b = Tensor::random({4, 5}, Dtype::c64, 2002);
    CHECK(relative_residual(dot(a, b), ref::dot(a, b)) < 1e-13);

    Tensor c = Tensor::random({2, 3}, Dtype::c64, 2003);
    Tensor d = Tensor::random({4, 2}, Dtype::c64, 2004);
    CHECK(max_abs_diff(kronecker(c, d), ref::kronecker(c, d)) == 0.0);
    CHECK(max_abs_diff(tensor_product(c, d), ref::tensor_product(c, d)) == 0.0);

    Tensor e = Tensor::random({4, 3}, Dtype::c64, 2005);
    CHECK(max_abs_diff(khatri_rao_col(Tensor::random({2, 3}, Dtype::c64, 2006), e),
                       ref::khatri_rao_col(Tensor::random({2, 3}, Dtype::c64, 2006), e)) == 0.0);

    Tensor f = Tensor::random({2, 5}, Dtype::c64, 2007);
    CHECK(max_abs_diff(khatri_rao_row(Tensor::random({2, 3}, Dtype::c64, 2008), f),
                       ref::khatri_rao_row(Tensor::random({2, 3}, Dtype::c64, 2008), f)) == 0.0);

    Tensor g1 = Tensor::random({2, 3, 2, 2}, Dtype::c64, 2009);
    Tensor g2 = Tensor::random({2, 2, 3, 2}, Dtype::c64, 2010);
    CHECK(max_abs_diff(tracy_singh(g1, g2), ref::tracy_singh(g1, g2)) == 0.0);
}

TEST_CASE("shape contract table") {
    const std::size_t I = 2, J = 3, K = 4, L = 5, P = 3, Q = 2, R = 4, S = 2;
    CHECK(dot(Tensor::random({I, J}, Dtype::f64, 1), Tensor::random({J, K}, Dtype::f64, 2))
              .shape() == std::vector<std::size_t>{I, K});
    CHECK(tensor_product(Tensor::random({I, J}, Dtype::f64, 3),
                         Tensor::random({K, L}, Dtype::f64, 4))
              .shape() == std::vector<std::size_t>{I, J, K, L});
    CHECK(kronecker(Tensor::random({I, J}, Dtype::f64, 5),
                    Tensor::random({K, L}, Dtype::f64, 6))
              .shape() == std::vector<std::size_t>{I * K, J * L});
    CHECK(hadamard(Tensor::random({I, J}, Dtype::f64, 7),
                   Tensor::random({I, J}, Dtype::f64, 8))
              .shape() == std::vector<std::size_t>{I, J});
    CHECK(khatri_rao_col(Tensor::random({I, J}, Dtype::f64, 9),
                         Tensor::random({K, J}, Dtype::f64, 10))
              .shape() == std::vector<std::size_t>{I * K, J});
    CHECK(tracy_singh(Tensor::random({I, J, K, L}, Dtype::f64, 11),
                      Tensor::random({P, Q, R, S}, Dtype::f64, 12))
              .shape() == std::vector<std::size_t>{I * P * K * R, J * Q * L * S});
}

TEST_CASE("kronecker flat index is associative") {
    Tensor a = Tensor::random({2, 2}, Dtype::f64, 3001);
    Tensor b = Tensor::random({3, 3}, Dtype::f64, 3002);
    Tensor c = Tensor::random({2, 2}, Dtype::f64, 3003);
    CHECK(relative_residual(kronecker(kronecker(a, b), c), kronecker(a, kronecker(b, c))) <
          1e-13);
}

TEST_CASE("khatri_rao_col of two single-row matrices is their hadamard") {
    Tensor a = Tensor::random({1, 4}, Dtype::f64, 3004);
    Tensor b = Tensor::random({1, 4}, Dtype::f64, 3005);
    CHECK(max_abs_diff(khatri_rao_col(a, b), hadamard(a, b)) == 0.0);
}
