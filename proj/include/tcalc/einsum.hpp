#pragma once

#include <string>
#include <vector>

#include "tcalc/tensor.hpp"

namespace tcalc {

/// Index labels for an einsum-style contraction.
///
/// Labels are small integers. The string form maps 'A'..'Z' to 0..25 and
/// 'a'..'z' to 26..51, so sorting by id is ASCII order; the integer-list
/// calling form uses the ids directly. A label repeated within one operand
/// denotes a diagonal ("iijk"); labels absent from the output are summed.
struct IndexSpec {
    std::vector<std::vector<int>> operands;
    std::vector<int> output;

    /// Parse "ij,jk->ik". Without "->" the output is the ASCII-sorted list
    /// of labels that appear exactly once across all operands.
    static IndexSpec parse(const std::string& text);

    /// Canonical text form (always with explicit "->"). Requires ids < 52.
    std::string to_string() const;

    static int label_of(char c);
    static char label_char(int id);

    bool operator==(const IndexSpec&) const = default;
};

struct EvalOptions {
    /// Scalar multiply-add budget for one evaluation.
    double budget = 1e9;
    /// Dense materialization cap (entries) for mediator tensors.
    std::size_t dense_cap = 100'000'000;
};

/// General einsum over any number of operands. Multi-operand contractions
/// run as greedy pairwise steps, choosing the pair whose result has the
/// smallest extent product (ties: lowest operand positions).
Tensor einsum_eval(const IndexSpec& spec, const std::vector<Tensor>& operands,
                   const EvalOptions& opts = {});

/// Convenience: parse + evaluate.
Tensor einsum(const std::string& subscripts, const std::vector<Tensor>& operands,
              const EvalOptions& opts = {});

/// Two-operand contraction; equals einsum_eval restricted to two operands.
Tensor contract_pair(const Tensor& a, const std::vector<int>& a_labels,
                     const Tensor& b, const std::vector<int>& b_labels,
                     const std::vector<int>& out_labels, const EvalOptions& opts = {});

/// Axis permutation: out.shape[d] == a.shape[perm[d]].
Tensor transpose(const Tensor& a, const std::vector<std::size_t>& perm);

/// Matrix transpose.
Tensor transpose(const Tensor& a);

/// Column-stacking vectorization of a matrix: out[i + j*I] = a[i,j].
Tensor vectorize_col(const Tensor& a);

/// Row-concatenating vectorization: out[j + i*J] = a[i,j]; equals
/// vectorize_col of the transpose.
Tensor vectorize_row(const Tensor& a);

/// Full first-index-fastest flattening of any rank (the serialization
/// order of the vectorization tensor); rank-2 case equals vectorize_col.
Tensor gamma_order_flatten(const Tensor& a);

/// Inverse of gamma_order_flatten: out[i1,..,iN] = v[i1 + i2*I1 + ...].
Tensor devectorize(const Tensor& v, const std::vector<std::size_t>& dims);

} // namespace tcalc
