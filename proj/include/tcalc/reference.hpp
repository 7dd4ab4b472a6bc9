#pragma once

#include <vector>

#include "tcalc/mediators.hpp"
#include "tcalc/tensor.hpp"

namespace tcalc::ref {

// Serial reference implementations. Everything here is written as plain
// nested loops straight off the defining formulas, with no threading and no
// shared machinery with the main kernels; tests pin the parallel engine
// against these, and tcalc-bench times the two side by side.

/// Pairwise contraction by accumulation over the full joint index space.
Tensor contract_pair(const Tensor& a, const std::vector<int>& a_labels, const Tensor& b,
                     const std::vector<int>& b_labels, const std::vector<int>& out_labels);

Tensor dot(const Tensor& a, const Tensor& b);
Tensor tensor_product(const Tensor& a, const Tensor& b);
Tensor kronecker(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const Tensor& b);
Tensor khatri_rao_col(const Tensor& a, const Tensor& b);
Tensor khatri_rao_row(const Tensor& a, const Tensor& b);
Tensor tracy_singh(const Tensor& a, const Tensor& b);

/// Signed circular convolution by membership test over the chi definition
/// (cubic in the extent).
Tensor conv1d(const Tensor& a, const Tensor& b, const Signature& sig);

/// DFT straight from the unitary matrix formula (quadratic).
Tensor dft(const Tensor& v, FourierDirection dir);

} // namespace tcalc::ref
