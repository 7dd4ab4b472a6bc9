#include <doctest.h>

#include "tcalc/io.hpp"
#include "tcalc/tensor.hpp"
#include "test_util.hpp"

using namespace tcalc;

TEST_CASE("shape/data consistency is enforced") {
    CHECK_THROWS_AS(Tensor::from_real({2, 3}, {1.0, 2.0}), ShapeError);
    CHECK_THROWS_AS(Tensor::from_real({0}, {}), ShapeError);
    CHECK(Tensor::from_real({}, {4.0}).size() == 1);
    CHECK(Tensor::from_real({}, {4.0}).rank() == 0);
}

TEST_CASE("row-major offsets: last index varies fastest") {
    Tensor t = Tensor::from_real({2, 3}, {0, 1, 2, 3, 4, 5});
    CHECK(t.at({0, 2}) == cplx(2.0, 0.0));
    CHECK(t.at({1, 0}) == cplx(3.0, 0.0));
}

TEST_CASE("complex promotion keeps values") {
    Tensor t = tt::mat({{1, 2}, {3, 4}});
    Tensor c = t.to_complex();
    CHECK(c.is_complex());
    CHECK(max_abs_diff(t, c) == 0.0);
}

TEST_CASE("drop_negligible_imag") {
    Tensor c = Tensor::from_complex({2}, {cplx(1.0, 1e-14), cplx(2.0, 0.0)});
    CHECK(!c.drop_negligible_imag(1e-10).is_complex());
    Tensor big = Tensor::from_complex({2}, {cplx(1.0, 1e-3), cplx(2.0, 0.0)});
    CHECK(big.drop_negligible_imag(1e-10).is_complex());
}

TEST_CASE("relative residual guards the zero corner") {
    Tensor z = Tensor::zeros({3});
    CHECK(relative_residual(z, z) == 0.0);
    Tensor a = tt::vec({1e-30, 0, 0});
    CHECK(relative_residual(a, z) == 1.0);
}

TEST_CASE("tensor JSON round trip is exact") {
    Tensor t = Tensor::random({3, 4}, Dtype::f64, 99);
    Tensor back = io::tensor_from_json(io::tensor_to_json(t));
    REQUIRE(back.shape() == t.shape());
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(back.rdata()[i] == t.rdata()[i]);

    Tensor c = Tensor::random({2, 2, 2}, Dtype::c64, 7);
    Tensor cback = io::tensor_from_json(io::tensor_to_json(c));
    REQUIRE(cback.is_complex());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(cback.cdata()[i] == c.cdata()[i]);
}

TEST_CASE("scalar (rank-0) tensors serialize with empty shape") {
    Tensor s = Tensor::scalar(2.5);
    Tensor back = io::tensor_from_json(io::tensor_to_json(s));
    CHECK(back.rank() == 0);
    CHECK(back.rdata()[0] == 2.5);
}

TEST_CASE("JSON load rejects non-finite data unless permissive") {
    // NaN/Inf serialize as null; strict loads refuse them
    const std::string text = R"({"shape":[1],"dtype":"f64","data":[null]})";
    CHECK_THROWS_AS(io::tensor_from_json(text), ParseError);
    io::LoadOptions permissive;
    permissive.allow_nonfinite = true;
    CHECK(std::isnan(io::tensor_from_json(text, permissive).rdata()[0]));
}

TEST_CASE("JSON load validates structure") {
    CHECK_THROWS_AS(io::tensor_from_json("not json"), ParseError);
    CHECK_THROWS_AS(io::tensor_from_json(R"({"shape":[2],"dtype":"f32","data":[1,2]})"),
                    ParseError);
    CHECK_THROWS_AS(io::tensor_from_json(R"({"shape":[2],"dtype":"c64","data":[1,2]})"),
                    ParseError);
    CHECK_THROWS_AS(io::tensor_from_json(R"({"shape":[0],"dtype":"f64","data":[]})"),
                    ParseError);
}
