#include "tcalc/einsum.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>

#include "tcalc/parallel.hpp"

namespace tcalc {

// ---------------------------------------------------------------------------
// IndexSpec
// ---------------------------------------------------------------------------

int IndexSpec::label_of(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return 26 + (c - 'a');
    return -1;
}

char IndexSpec::label_char(int id) {
    if (id >= 0 && id < 26) return static_cast<char>('A' + id);
    if (id >= 26 && id < 52) return static_cast<char>('a' + id - 26);
    throw Error("label id " + std::to_string(id) + " has no character form");
}

static std::string label_name(int id) {
    if (id >= 0 && id < 52) return std::string(1, IndexSpec::label_char(id));
    return "#" + std::to_string(id);
}

IndexSpec IndexSpec::parse(const std::string& text) {
    IndexSpec spec;
    spec.operands.emplace_back();
    bool in_output = false;
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
        char c = text[pos];
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == ',') {
            if (in_output) throw ParseError("',' not allowed after '->'", pos);
            spec.operands.emplace_back();
            continue;
        }
        if (c == '-') {
            if (pos + 1 >= text.size() || text[pos + 1] != '>')
                throw ParseError("'-' must be part of '->'", pos);
            if (in_output) throw ParseError("duplicate '->'", pos);
            in_output = true;
            ++pos;
            continue;
        }
        int id = label_of(c);
        if (id < 0) throw ParseError(std::string("invalid subscript character '") + c + "'", pos);
        (in_output ? spec.output : spec.operands.back()).push_back(id);
    }
    if (!in_output) {
        // implicit output: labels that appear exactly once, in ASCII order
        std::map<int, int> count;
        for (const auto& op : spec.operands)
            for (int l : op) ++count[l];
        for (const auto& [l, n] : count)
            if (n == 1) spec.output.push_back(l);
    }
    return spec;
}

std::string IndexSpec::to_string() const {
    std::string s;
    for (std::size_t k = 0; k < operands.size(); ++k) {
        if (k) s += ',';
        for (int l : operands[k]) s += label_char(l);
    }
    s += "->";
    for (int l : output) s += label_char(l);
    return s;
}

// ---------------------------------------------------------------------------
// Contraction kernels
// ---------------------------------------------------------------------------

namespace {

// Per-label machine for one contraction step. "Out" labels are the unique
// output labels in first-occurrence order; "sum" labels are everything else.
// A label's stride within an operand is the sum of the row-major strides of
// all axes carrying it, which makes repeated labels (diagonals) and repeated
// output labels (diagonal embedding) fall out of the same loop.
struct StepPlan {
    std::vector<std::size_t> o_ext, c_ext;
    std::vector<std::size_t> a_o, b_o, out_o;
    std::vector<std::size_t> a_c, b_c;
    std::size_t o_total = 1, c_total = 1;
    std::vector<std::size_t> out_shape;
    bool has_b = false;
};

using ExtMap = std::map<int, std::size_t>;

void bind_extents(ExtMap& ext, const std::vector<int>& labels,
                  const std::vector<std::size_t>& shape) {
    if (labels.size() != shape.size())
        throw ShapeError("subscript has " + std::to_string(labels.size()) +
                         " labels but operand has rank " + std::to_string(shape.size()));
    for (std::size_t d = 0; d < labels.size(); ++d) {
        auto [it, fresh] = ext.emplace(labels[d], shape[d]);
        if (!fresh && it->second != shape[d])
            throw ShapeError("extent mismatch for label '" + label_name(labels[d]) + "': " +
                             std::to_string(it->second) + " vs " + std::to_string(shape[d]));
    }
}

std::vector<std::size_t> label_strides(const std::vector<int>& labels,
                                       const std::vector<std::size_t>& shape,
                                       const std::vector<int>& which) {
    std::vector<std::size_t> strides = strides_of(shape);
    std::vector<std::size_t> result(which.size(), 0);
    for (std::size_t k = 0; k < which.size(); ++k)
        for (std::size_t d = 0; d < labels.size(); ++d)
            if (labels[d] == which[k]) result[k] += strides[d];
    return result;
}

StepPlan make_plan(const ExtMap& ext, const std::vector<int>& la,
                   const std::vector<std::size_t>& sa, const std::vector<int>* lb,
                   const std::vector<std::size_t>* sb, const std::vector<int>& lout) {
    StepPlan p;
    p.has_b = lb != nullptr;

    std::vector<int> uniq_out;
    for (int l : lout)
        if (std::find(uniq_out.begin(), uniq_out.end(), l) == uniq_out.end())
            uniq_out.push_back(l);

    std::set<int> present(la.begin(), la.end());
    if (lb) present.insert(lb->begin(), lb->end());
    for (int l : uniq_out)
        if (!present.count(l))
            throw ShapeError("unknown output label '" + label_name(l) + "'");

    std::vector<int> summed;
    for (int l : present)
        if (std::find(uniq_out.begin(), uniq_out.end(), l) == uniq_out.end())
            summed.push_back(l);

    for (int l : uniq_out) {
        p.o_ext.push_back(ext.at(l));
        p.o_total *= ext.at(l);
    }
    for (int l : summed) {
        p.c_ext.push_back(ext.at(l));
        p.c_total *= ext.at(l);
    }
    for (int l : lout) p.out_shape.push_back(ext.at(l));

    p.a_o = label_strides(la, sa, uniq_out);
    p.a_c = label_strides(la, sa, summed);
    if (lb) {
        p.b_o = label_strides(*lb, *sb, uniq_out);
        p.b_c = label_strides(*lb, *sb, summed);
    }
    p.out_o = label_strides(lout, p.out_shape, uniq_out);
    return p;
}

template <typename T>
void run_step(const T* a, const T* b, T* out, const StepPlan& p) {
    const std::size_t grain =
        std::max<std::size_t>(1, par::kGrain / std::max<std::size_t>(p.c_total, 1));
    par::for_n(
        p.o_total,
        [&](std::size_t oflat) {
            std::size_t rem = oflat, ao = 0, bo = 0, oo = 0;
            for (std::size_t d = p.o_ext.size(); d-- > 0;) {
                std::size_t ix = rem % p.o_ext[d];
                rem /= p.o_ext[d];
                ao += ix * p.a_o[d];
                oo += ix * p.out_o[d];
                if (b) bo += ix * p.b_o[d];
            }
            T acc{};
            if (p.c_ext.empty()) {
                acc = b ? a[ao] * b[bo] : a[ao];
            } else {
                const std::size_t last = p.c_ext.size() - 1;
                const std::size_t len = p.c_ext[last];
                const std::size_t sa = p.a_c[last];
                const std::size_t sb = b ? p.b_c[last] : 0;
                const std::size_t outer = p.c_total / len;
                for (std::size_t of = 0; of < outer; ++of) {
                    std::size_t crem = of, ai = ao, bi = bo;
                    for (std::size_t d = last; d-- > 0;) {
                        std::size_t ix = crem % p.c_ext[d];
                        crem /= p.c_ext[d];
                        ai += ix * p.a_c[d];
                        if (b) bi += ix * p.b_c[d];
                    }
                    if (b) {
                        for (std::size_t l = 0; l < len; ++l)
                            acc += a[ai + l * sa] * b[bi + l * sb];
                    } else {
                        for (std::size_t l = 0; l < len; ++l) acc += a[ai + l * sa];
                    }
                }
            }
            out[oo] = acc;
        },
        grain);
}

double step_cost(const StepPlan& p) {
    return static_cast<double>(p.o_total) * static_cast<double>(p.c_total);
}

// One contraction step over one or two operands. Mixed dtypes promote to
// complex; all-real stays real.
Tensor execute_step(const ExtMap& ext, const Tensor& a, const std::vector<int>& la,
                    const Tensor* b, const std::vector<int>* lb, const std::vector<int>& lout,
                    double& spent, double budget) {
    StepPlan plan = make_plan(ext, la, a.shape(), lb, b ? &b->shape() : nullptr, lout);
    spent += step_cost(plan);
    if (spent > budget)
        throw BudgetError("evaluation budget exceeded: " + std::to_string(spent) +
                          " multiply-adds > " + std::to_string(budget));

    const bool complex = a.is_complex() || (b && b->is_complex());
    if (!complex) {
        Tensor out = Tensor::zeros(plan.out_shape, Dtype::f64);
        run_step<double>(a.rdata(), b ? b->rdata() : nullptr, out.rdata(), plan);
        return out;
    }
    Tensor atmp, btmp;
    const Tensor* ap = &a;
    const Tensor* bp = b;
    if (!a.is_complex()) {
        atmp = a.to_complex();
        ap = &atmp;
    }
    if (b && !b->is_complex()) {
        btmp = b->to_complex();
        bp = &btmp;
    }
    Tensor out = Tensor::zeros(plan.out_shape, Dtype::c64);
    run_step<cplx>(ap->cdata(), bp ? bp->cdata() : nullptr, out.cdata(), plan);
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

Tensor contract_pair(const Tensor& a, const std::vector<int>& a_labels, const Tensor& b,
                     const std::vector<int>& b_labels, const std::vector<int>& out_labels,
                     const EvalOptions& opts) {
    ExtMap ext;
    bind_extents(ext, a_labels, a.shape());
    bind_extents(ext, b_labels, b.shape());
    double spent = 0.0;
    return execute_step(ext, a, a_labels, &b, &b_labels, out_labels, spent, opts.budget);
}

Tensor einsum_eval(const IndexSpec& spec, const std::vector<Tensor>& operands,
                   const EvalOptions& opts) {
    if (operands.empty()) throw ShapeError("einsum: empty operand list");
    if (spec.operands.size() != operands.size())
        throw ShapeError("einsum: spec names " + std::to_string(spec.operands.size()) +
                         " operands but " + std::to_string(operands.size()) + " were given");

    ExtMap ext;
    for (std::size_t k = 0; k < operands.size(); ++k)
        bind_extents(ext, spec.operands[k], operands[k].shape());
    for (int l : spec.output)
        if (!ext.count(l)) throw ShapeError("unknown output label '" + label_name(l) + "'");

    struct Slot {
        const Tensor* t;
        std::vector<int> labels;
    };
    std::deque<Tensor> arena; // keeps intermediate tensors alive and stable
    std::vector<Slot> slots;
    for (std::size_t k = 0; k < operands.size(); ++k)
        slots.push_back({&operands[k], spec.operands[k]});

    double spent = 0.0;

    while (slots.size() > 1) {
        // Labels demanded by everything outside a candidate pair.
        std::size_t best_i = 0, best_j = 1;
        double best_size = -1.0;
        std::vector<int> best_keep;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            for (std::size_t j = i + 1; j < slots.size(); ++j) {
                std::set<int> needed(spec.output.begin(), spec.output.end());
                for (std::size_t k = 0; k < slots.size(); ++k)
                    if (k != i && k != j)
                        needed.insert(slots[k].labels.begin(), slots[k].labels.end());
                std::set<int> pair_labels(slots[i].labels.begin(), slots[i].labels.end());
                pair_labels.insert(slots[j].labels.begin(), slots[j].labels.end());
                std::vector<int> keep;
                double size = 1.0;
                for (int l : pair_labels)
                    if (needed.count(l)) {
                        keep.push_back(l);
                        size *= static_cast<double>(ext.at(l));
                    }
                if (best_size < 0.0 || size < best_size) {
                    best_size = size;
                    best_i = i;
                    best_j = j;
                    best_keep = std::move(keep);
                }
            }
        }
        arena.push_back(execute_step(ext, *slots[best_i].t, slots[best_i].labels, slots[best_j].t,
                                     &slots[best_j].labels, best_keep, spent, opts.budget));
        slots[best_i] = {&arena.back(), best_keep};
        slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(best_j));
    }

    return execute_step(ext, *slots[0].t, slots[0].labels, nullptr, nullptr, spec.output, spent,
                        opts.budget);
}

Tensor einsum(const std::string& subscripts, const std::vector<Tensor>& operands,
              const EvalOptions& opts) {
    return einsum_eval(IndexSpec::parse(subscripts), operands, opts);
}

// ---------------------------------------------------------------------------
// Axis reorderings
// ---------------------------------------------------------------------------

Tensor transpose(const Tensor& a, const std::vector<std::size_t>& perm) {
    const std::size_t r = a.rank();
    if (perm.size() != r) throw ShapeError("invalid permutation: wrong length");
    std::vector<char> seen(r, 0);
    for (std::size_t v : perm) {
        if (v >= r || seen[v]) throw ShapeError("invalid permutation");
        seen[v] = 1;
    }
    std::vector<std::size_t> out_shape(r);
    for (std::size_t d = 0; d < r; ++d) out_shape[d] = a.shape()[perm[d]];

    std::vector<std::size_t> a_strides = strides_of(a.shape());
    std::vector<std::size_t> gather(r);
    for (std::size_t d = 0; d < r; ++d) gather[d] = a_strides[perm[d]];

    Tensor out = Tensor::zeros(out_shape, a.dtype());
    const std::size_t n = out.size();
    auto src_of = [&](std::size_t oflat) {
        std::size_t rem = oflat, off = 0;
        for (std::size_t d = r; d-- > 0;) {
            off += (rem % out_shape[d]) * gather[d];
            rem /= out_shape[d];
        }
        return off;
    };
    if (a.is_complex()) {
        const cplx* src = a.cdata();
        cplx* dst = out.cdata();
        par::for_n(n, [&](std::size_t i) { dst[i] = src[src_of(i)]; });
    } else {
        const double* src = a.rdata();
        double* dst = out.rdata();
        par::for_n(n, [&](std::size_t i) { dst[i] = src[src_of(i)]; });
    }
    return out;
}

Tensor transpose(const Tensor& a) {
    if (a.rank() != 2) throw ShapeError("matrix transpose requires rank 2, got rank " +
                                        std::to_string(a.rank()));
    return transpose(a, {1, 0});
}

Tensor vectorize_col(const Tensor& a) {
    if (a.rank() != 2)
        throw ShapeError("vectorize_col requires rank 2, got rank " + std::to_string(a.rank()));
    return gamma_order_flatten(a);
}

Tensor vectorize_row(const Tensor& a) {
    if (a.rank() != 2)
        throw ShapeError("vectorize_row requires rank 2, got rank " + std::to_string(a.rank()));
    // n = j + i*J is exactly the row-major buffer order
    const std::size_t n = a.size();
    if (a.is_complex())
        return Tensor::from_complex({n}, std::vector<cplx>(a.cdata(), a.cdata() + n));
    return Tensor::from_real({n}, std::vector<double>(a.rdata(), a.rdata() + n));
}

Tensor gamma_order_flatten(const Tensor& a) {
    const std::size_t r = a.rank();
    const std::size_t n = a.size();
    // serialization stride of axis d is the product of extents before it
    std::vector<std::size_t> g(r);
    std::size_t acc = 1;
    for (std::size_t d = 0; d < r; ++d) {
        g[d] = acc;
        acc *= a.shape()[d];
    }
    Tensor out = Tensor::zeros({n}, a.dtype());
    auto dst_of = [&](std::size_t aflat) {
        std::size_t rem = aflat, m = 0;
        for (std::size_t d = r; d-- > 0;) {
            m += (rem % a.shape()[d]) * g[d];
            rem /= a.shape()[d];
        }
        return m;
    };
    if (a.is_complex()) {
        const cplx* src = a.cdata();
        cplx* dst = out.cdata();
        for (std::size_t i = 0; i < n; ++i) dst[dst_of(i)] = src[i];
    } else {
        const double* src = a.rdata();
        double* dst = out.rdata();
        for (std::size_t i = 0; i < n; ++i) dst[dst_of(i)] = src[i];
    }
    return out;
}

Tensor devectorize(const Tensor& v, const std::vector<std::size_t>& dims) {
    if (v.rank() != 1)
        throw ShapeError("devectorize requires a rank-1 tensor, got rank " +
                         std::to_string(v.rank()));
    if (numel_of(dims) != v.size())
        throw ShapeError("devectorize: product of extents " + std::to_string(numel_of(dims)) +
                         " does not match vector length " + std::to_string(v.size()));
    Tensor out = Tensor::zeros(dims, v.dtype());
    std::vector<std::size_t> row = strides_of(dims);
    const std::size_t n = v.size();
    auto dst_of = [&](std::size_t m) {
        std::size_t off = 0;
        for (std::size_t d = 0; d < dims.size(); ++d) {
            off += (m % dims[d]) * row[d];
            m /= dims[d];
        }
        return off;
    };
    if (v.is_complex()) {
        const cplx* src = v.cdata();
        cplx* dst = out.cdata();
        for (std::size_t m = 0; m < n; ++m) dst[dst_of(m)] = src[m];
    } else {
        const double* src = v.rdata();
        double* dst = out.rdata();
        for (std::size_t m = 0; m < n; ++m) dst[dst_of(m)] = src[m];
    }
    return out;
}

} // namespace tcalc
