#pragma once

#include <string>

#include "tcalc/diagram.hpp"
#include "tcalc/tensor.hpp"

namespace tcalc::io {

struct LoadOptions {
    /// Accept NaN/Inf entries on load (rejected by default).
    bool allow_nonfinite = false;
    /// Base directory for "tensor_ref" entries in diagram files.
    std::string base_dir;
};

/// Tensor interchange record: {"shape":[..], "dtype":"f64"|"c64",
/// "data":[..]} with data flat row-major; c64 data is a flat list of
/// [re, im] pairs. Numbers round-trip exactly.
std::string tensor_to_json(const Tensor& t);
Tensor tensor_from_json(const std::string& text, const LoadOptions& opts = {});

void save_tensor(const std::string& path, const Tensor& t);
Tensor load_tensor(const std::string& path, const LoadOptions& opts = {});

/// Diagram record: nodes (kind + parameters, dense payload inline or via
/// "tensor_ref"), wires as [[node,port],[node,port]] pairs, ordered free
/// port list, and the accumulated scale.
std::string diagram_to_json(const Diagram& d);
Diagram diagram_from_json(const std::string& text, const LoadOptions& opts = {});

void save_diagram(const std::string& path, const Diagram& d);
Diagram load_diagram(const std::string& path, const LoadOptions& opts = {});

} // namespace tcalc::io
