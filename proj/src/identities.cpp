#include "tcalc/identities.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "tcalc/einsum.hpp"
#include "tcalc/mediators.hpp"
#include "tcalc/parallel.hpp"
#include "tcalc/products.hpp"

namespace tcalc {

namespace {

using Dims = std::map<std::string, std::size_t>;

std::size_t dim_of(const Dims& dims, const std::string& sym) {
    auto it = dims.find(sym);
    return it == dims.end() ? 2 : it->second;
}

std::uint64_t op_seed(std::uint64_t seed, std::size_t idx) {
    return seed * 1000003ull + 7919ull * (idx + 1);
}

Tensor rnd(std::size_t r, std::size_t c, std::uint64_t seed, std::size_t idx) {
    return Tensor::random({r, c}, Dtype::c64, op_seed(seed, idx));
}

Tensor rnd4(std::size_t a, std::size_t b, std::size_t c, std::size_t d, std::uint64_t seed,
            std::size_t idx) {
    return Tensor::random({a, b, c, d}, Dtype::c64, op_seed(seed, idx));
}

// f(g(A,B), g(C,D)) vs g(f(A,C), f(B,D)); identities 2 and 3 are the two
// documented (f,g) instances of this exchange law.
using Product = std::function<Tensor(const Tensor&, const Tensor&)>;

double bisymmetry_residual(const Product& f, const Product& g, const Tensor& a, const Tensor& b,
                           const Tensor& c, const Tensor& d) {
    return relative_residual(f(g(a, b), g(c, d)), g(f(a, c), f(b, d)));
}

// Rank-4 block form of the outer product col(X)row(Y): axes
// (X-row, Y-col, X-col, Y-row), i.e. the fast components of the flat row
// and column indices become the Tracy-Singh outer pair.
Tensor colrow_block(const Tensor& x, const Tensor& y) {
    const std::size_t i_e = x.shape()[0], j_e = x.shape()[1];
    const std::size_t p_e = y.shape()[0], q_e = y.shape()[1];
    const Tensor cx = vectorize_col(x);
    const Tensor ry = vectorize_row(y);
    Tensor out = Tensor::zeros({i_e, q_e, j_e, p_e}, Dtype::c64);
    for (std::size_t i = 0; i < i_e; ++i)
        for (std::size_t q = 0; q < q_e; ++q)
            for (std::size_t j = 0; j < j_e; ++j)
                for (std::size_t p = 0; p < p_e; ++p)
                    out.cdata()[((i * q_e + q) * j_e + j) * p_e + p] =
                        cx.at(i + j * i_e) * ry.at(q + p * q_e);
    return out;
}

Tensor as_column(const Tensor& v) {
    Tensor m = Tensor::zeros({v.size(), 1}, v.dtype());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v.is_complex())
            m.cdata()[i] = v.cdata()[i];
        else
            m.rdata()[i] = v.rdata()[i];
    }
    return m;
}

Tensor as_row(const Tensor& v) {
    Tensor m = Tensor::zeros({1, v.size()}, v.dtype());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v.is_complex())
            m.cdata()[i] = v.cdata()[i];
        else
            m.rdata()[i] = v.rdata()[i];
    }
    return m;
}

Tensor flatten(const Tensor& m) {
    // rank-1 view of any tensor's row-major buffer
    std::vector<std::size_t> shape{m.size()};
    if (m.is_complex())
        return Tensor::from_complex(shape, std::vector<cplx>(m.cdata(), m.cdata() + m.size()));
    return Tensor::from_real(shape, std::vector<double>(m.rdata(), m.rdata() + m.size()));
}

struct Entry {
    std::string name;
    std::vector<std::string> symbols;
    std::function<double(const Dims&, std::uint64_t)> run;
};

const std::vector<Entry>& catalog() {
    static const std::vector<Entry> entries = {
        {"mixed-product",
         {"I", "J", "K", "P", "Q", "R"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J"), K = dim_of(d, "K");
             const auto P = dim_of(d, "P"), Q = dim_of(d, "Q"), R = dim_of(d, "R");
             const Tensor a = rnd(I, J, s, 0), b = rnd(J, K, s, 1);
             const Tensor c = rnd(P, Q, s, 2), e = rnd(Q, R, s, 3);
             return relative_residual(kronecker(dot(a, b), dot(c, e)),
                                      dot(kronecker(a, c), kronecker(b, e)));
         }},
        {"kr-hadamard-bisym",
         {"I", "J", "K"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J"), K = dim_of(d, "K");
             const Tensor a = rnd(I, J, s, 0), c = rnd(I, J, s, 2);
             const Tensor b = rnd(K, J, s, 1), e = rnd(K, J, s, 3);
             return bisymmetry_residual(
                 [](const Tensor& x, const Tensor& y) { return hadamard(x, y); },
                 [](const Tensor& x, const Tensor& y) { return khatri_rao_col(x, y); }, a, b, c,
                 e);
         }},
        {"kron-hadamard-bisym",
         {"I", "J", "K", "L"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J");
             const auto K = dim_of(d, "K"), L = dim_of(d, "L");
             const Tensor a = rnd(I, J, s, 0), c = rnd(I, J, s, 2);
             const Tensor b = rnd(K, L, s, 1), e = rnd(K, L, s, 3);
             return bisymmetry_residual(
                 [](const Tensor& x, const Tensor& y) { return hadamard(x, y); },
                 [](const Tensor& x, const Tensor& y) { return kronecker(x, y); }, a, b, c, e);
         }},
        {"tracy-singh-mixed",
         {"I", "J", "K", "L", "M", "N", "P", "Q", "R", "S", "T", "U"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J"), K = dim_of(d, "K"),
                        L = dim_of(d, "L"), M = dim_of(d, "M"), N = dim_of(d, "N"),
                        P = dim_of(d, "P"), Q = dim_of(d, "Q"), R = dim_of(d, "R"),
                        S = dim_of(d, "S"), T = dim_of(d, "T"), U = dim_of(d, "U");
             const Tensor a = rnd4(I, J, K, L, s, 0), b = rnd4(P, Q, R, S, s, 1);
             const Tensor c = rnd4(J, M, L, N, s, 2), e = rnd4(Q, T, S, U, s, 3);
             auto block_dot = [](const Tensor& x, const Tensor& y) {
                 return einsum("ijkl,jmln->imkn", {x, y});
             };
             return relative_residual(dot(tracy_singh(a, b), tracy_singh(c, e)),
                                      tracy_singh(block_dot(a, c), block_dot(b, e)));
         }},
        {"kr-transpose",
         {"I", "J", "K", "M"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J");
             const auto K = dim_of(d, "K"), M = dim_of(d, "M");
             const Tensor a = rnd(I, J, s, 0), b = rnd(K, J, s, 1);
             const Tensor c = rnd(I, M, s, 2), e = rnd(K, M, s, 3);
             return relative_residual(
                 dot(transpose(khatri_rao_col(a, b)), khatri_rao_col(c, e)),
                 hadamard(dot(transpose(a), c), dot(transpose(b), e)));
         }},
        {"kron-factor",
         {"I", "J", "K", "L"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J");
             const auto K = dim_of(d, "K"), L = dim_of(d, "L");
             const Tensor a = rnd(I, J, s, 0), b = rnd(K, L, s, 1);
             return relative_residual(
                 kronecker(a, b),
                 dot(kronecker(a, Tensor::eye(K)), kronecker(Tensor::eye(J), b)));
         }},
        {"kron-trace",
         {"I", "K"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), K = dim_of(d, "K");
             const Tensor a = rnd(I, I, s, 0), b = rnd(K, K, s, 1);
             const Tensor lhs = trace(kronecker(a, b));
             const Tensor rhs =
                 Tensor::scalar(trace(a).at(std::size_t{0}) * trace(b).at(std::size_t{0}));
             return relative_residual(lhs, rhs);
         }},
        {"kron-transpose",
         {"I", "J", "K", "L"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J");
             const auto K = dim_of(d, "K"), L = dim_of(d, "L");
             const Tensor a = rnd(I, J, s, 0), b = rnd(K, L, s, 1);
             return relative_residual(transpose(kronecker(a, b)),
                                      kronecker(transpose(a), transpose(b)));
         }},
        {"vec-triple",
         {"I", "J", "K", "L"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J");
             const auto K = dim_of(d, "K"), L = dim_of(d, "L");
             const Tensor a = rnd(I, J, s, 0), b = rnd(J, K, s, 1), c = rnd(K, L, s, 2);
             // (C^T (x) A) in the textbook serialization == kron(A, C^T)
             // under the native gamma layout
             const Tensor lhs = vectorize_col(dot(dot(a, b), c));
             const Tensor rhs =
                 dot(kronecker(transpose(c), a, KronLayout::textbook), as_column(vectorize_col(b)));
             return relative_residual(lhs, flatten(rhs));
         }},
        {"vec-triple-diag",
         {"I", "J", "L"},
         [](const Dims& d, std::uint64_t s) {
             if (d.count("K") && dim_of(d, "K") != dim_of(d, "J"))
                 throw ShapeError(
                     "vec-triple-diag: B must be diagonal (square), so K must equal J");
             const auto I = dim_of(d, "I"), J = dim_of(d, "J"), L = dim_of(d, "L");
             const Tensor a = rnd(I, J, s, 0), c = rnd(J, L, s, 2);
             const Tensor bdiag = Tensor::random({J}, Dtype::c64, op_seed(s, 1));
             const Tensor b = diag_embed(bdiag);
             const Tensor lhs = vectorize_col(dot(dot(a, b), c));
             // (C^T kr A) diag(B), Khatri-Rao in the textbook serialization
             const Tensor rhs = dot(khatri_rao_col(a, transpose(c)), as_column(bdiag));
             return relative_residual(lhs, flatten(rhs));
         }},
        {"new-tracy-singh",
         {"I", "J", "K", "L", "P", "Q", "R", "S"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J"), K = dim_of(d, "K"),
                        L = dim_of(d, "L"), P = dim_of(d, "P"), Q = dim_of(d, "Q"),
                        R = dim_of(d, "R"), S = dim_of(d, "S");
             const Tensor a = rnd(I, J, s, 0), b = rnd(K, L, s, 1);
             const Tensor c = rnd(P, Q, s, 2), e = rnd(R, S, s, 3);
             const Tensor lhs = dot(as_column(vectorize_col(kronecker(a, b))),
                                    as_row(vectorize_row(kronecker(c, e))));
             const Tensor rhs = tracy_singh(colrow_block(a, c), colrow_block(b, e));
             return relative_residual(lhs, rhs);
         }},
        {"new-hadamard",
         {"I", "J", "P", "Q"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J");
             const auto P = dim_of(d, "P"), Q = dim_of(d, "Q");
             const Tensor a = rnd(I, J, s, 0), b = rnd(I, J, s, 1);
             const Tensor c = rnd(P, Q, s, 2), e = rnd(P, Q, s, 3);
             const Tensor lhs = dot(as_column(vectorize_col(hadamard(a, b))),
                                    as_row(vectorize_row(hadamard(c, e))));
             const Tensor rhs = hadamard(dot(as_column(vectorize_col(a)),
                                             as_row(vectorize_row(c))),
                                         dot(as_column(vectorize_col(b)),
                                             as_row(vectorize_row(e))));
             return relative_residual(lhs, rhs);
         }},
        {"col-hadamard",
         {"I", "J"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J");
             const Tensor a = rnd(I, J, s, 0), b = rnd(I, J, s, 1);
             return relative_residual(vectorize_col(hadamard(a, b)),
                                      hadamard(vectorize_col(a), vectorize_col(b)));
         }},
        {"row-hadamard",
         {"I", "J"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J");
             const Tensor c = rnd(I, J, s, 0), e = rnd(I, J, s, 1);
             return relative_residual(vectorize_row(hadamard(c, e)),
                                      hadamard(vectorize_row(c), vectorize_row(e)));
         }},
        {"colrow-transpose",
         {"I", "J"},
         [](const Dims& d, std::uint64_t s) {
             const auto I = dim_of(d, "I"), J = dim_of(d, "J");
             const Tensor a = rnd(I, J, s, 0);
             return relative_residual(vectorize_col(a), vectorize_row(transpose(a)));
         }},
    };
    return entries;
}

const Entry& entry_of(const std::string& name) {
    for (const Entry& e : catalog())
        if (e.name == name) return e;
    throw Error("unknown identity '" + name + "'");
}

} // namespace

const std::vector<std::string>& identity_catalog() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const Entry& e : catalog()) v.push_back(e.name);
        return v;
    }();
    return names;
}

std::vector<std::string> identity_symbols(const std::string& name) {
    return entry_of(name).symbols;
}

IdentityCase check(const std::string& name, const std::map<std::string, std::size_t>& dims,
                   std::uint64_t seed) {
    const Entry& e = entry_of(name);
    for (const auto& [sym, extent] : dims)
        if (extent < 1) throw ShapeError("identity '" + name + "': extent " + sym + " must be >= 1");
    IdentityCase c;
    c.name = name;
    c.dims = dims;
    c.seed = seed;
    c.residual = e.run(dims, seed);
    return c;
}

std::vector<IdentityCase> check_all(const CheckProfile& profile) {
    std::vector<IdentityCase> worst;
    if (profile.trials == 0) return worst;
    const auto& entries = catalog();
    worst.resize(entries.size());

    for (std::size_t idx = 0; idx < entries.size(); ++idx) {
        const Entry& e = entries[idx];
        IdentityCase agg;
        agg.name = e.name;
        agg.residual = -1.0;

        std::vector<IdentityCase> cases(profile.trials);
        par::for_n(
            profile.trials,
            [&](std::size_t t) {
                std::mt19937_64 rng(profile.seed + 977ull * idx + t);
                std::uniform_int_distribution<std::size_t> ext(profile.min_extent,
                                                               profile.max_extent);
                Dims dims;
                for (const std::string& sym : e.symbols) dims[sym] = ext(rng);
                cases[t] = check(e.name, dims, profile.seed + 31ull * t);
            },
            1);
        for (const IdentityCase& c : cases)
            if (c.residual > agg.residual) agg = c;
        worst[idx] = std::move(agg);
    }
    return worst;
}

} // namespace tcalc
