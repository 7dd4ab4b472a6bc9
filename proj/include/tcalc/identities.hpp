#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tcalc/tensor.hpp"

namespace tcalc {

/// One evaluated identity instance. residual is the max-abs deviation of
/// the two sides relative to the max magnitude of both.
struct IdentityCase {
    std::string name;
    std::map<std::string, std::size_t> dims;
    std::uint64_t seed = 0;
    double residual = 0.0;

    bool pass(double tol = 1e-10) const { return residual < tol; }
};

/// Catalog names in fixed order.
const std::vector<std::string>& identity_catalog();

/// Extent symbols an identity draws (e.g. {"I","J","K"}); missing map
/// entries in check() default to 2.
std::vector<std::string> identity_symbols(const std::string& name);

/// Evaluate one identity on seeded random complex operands under the given
/// extent assignment. Throws for unknown names or dims violating the
/// identity's shape contract.
IdentityCase check(const std::string& name, const std::map<std::string, std::size_t>& dims,
                   std::uint64_t seed);

struct CheckProfile {
    std::size_t min_extent = 2;
    std::size_t max_extent = 5;
    std::size_t trials = 100;
    std::uint64_t seed = 12345;
};

/// Run every catalog identity `trials` times over randomized extents from
/// the profile; returns the worst case per identity, in catalog order.
/// Individual trials are independent and evaluated concurrently.
std::vector<IdentityCase> check_all(const CheckProfile& profile);

} // namespace tcalc
