#pragma once

#include "tcalc/tensor.hpp"

namespace tcalc {

/// Index serialization for the flattened Kronecker-family outputs.
///
/// `gamma` is the native convention (first-listed index fastest,
/// m = i + k*I); `textbook` permutes the serialization inputs to the common
/// slow-first layout (m = i*K + k).
enum class KronLayout { gamma, textbook };

/// (I x J) . (J x K) -> I x K.
Tensor dot(const Tensor& a, const Tensor& b);

/// (I x J), (K x L) -> rank-4 I x J x K x L, out[i,j,k,l] = a[i,j]*b[k,l].
Tensor tensor_product(const Tensor& a, const Tensor& b);

/// (I x J), (K x L) -> IK x JL with m = i + k*I, n = j + l*J under the
/// gamma layout. Never materializes the rank-4 intermediate.
Tensor kronecker(const Tensor& a, const Tensor& b, KronLayout layout = KronLayout::gamma);

/// Entrywise product; any rank, equal shapes.
Tensor hadamard(const Tensor& a, const Tensor& b);

/// (I x J), (K x J) -> IK x J; column n is kron of the operands' columns n.
Tensor khatri_rao_col(const Tensor& a, const Tensor& b);

/// (I x J), (I x L) -> I x JL; Hadamard on rows, serialization on columns.
Tensor khatri_rao_row(const Tensor& a, const Tensor& b);

/// Block-matrix double Kronecker product. Operands are rank-4
/// (row-outer, col-outer, row-inner, col-inner); result is
/// IPKR x JQLS with outer-with-outer, inner-with-inner serialization.
Tensor tracy_singh(const Tensor& a, const Tensor& b);

/// Mediator-contraction reference paths: the same six products computed by
/// contracting dense delta/gamma tensors through the einsum engine.
/// Kept as the algebraic cross-check for the direct kernels above.
namespace mediated {

Tensor dot(const Tensor& a, const Tensor& b);
Tensor tensor_product(const Tensor& a, const Tensor& b);
Tensor kronecker(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const Tensor& b); // rank-2 operands
Tensor khatri_rao_col(const Tensor& a, const Tensor& b);
Tensor khatri_rao_row(const Tensor& a, const Tensor& b);
Tensor tracy_singh(const Tensor& a, const Tensor& b);

} // namespace mediated

} // namespace tcalc
