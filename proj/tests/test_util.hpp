#pragma once

#include <vector>

#include "tcalc/tensor.hpp"

namespace tt {

inline tcalc::Tensor mat(const std::vector<std::vector<double>>& rows) {
    std::vector<double> flat;
    for (const auto& r : rows)
        for (double v : r) flat.push_back(v);
    return tcalc::Tensor::from_real({rows.size(), rows[0].size()}, std::move(flat));
}

inline tcalc::Tensor vec(std::vector<double> v) {
    const std::size_t n = v.size();
    return tcalc::Tensor::from_real({n}, std::move(v));
}

inline tcalc::Tensor cvec(std::vector<tcalc::cplx> v) {
    const std::size_t n = v.size();
    return tcalc::Tensor::from_complex({n}, std::move(v));
}

inline tcalc::Tensor basis_vec(std::size_t n, std::size_t k) {
    std::vector<double> v(n, 0.0);
    v[k] = 1.0;
    return tcalc::Tensor::from_real({n}, std::move(v));
}

} // namespace tt
