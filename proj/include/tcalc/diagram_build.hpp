#pragma once

#include <string>
#include <vector>

#include "tcalc/diagram.hpp"

namespace tcalc {

/// Assembles diagrams from matrix/vector fragments wired the way the
/// product definitions draw them: dense leaves plus delta/gamma mediator
/// nodes. Fragments hold the still-open row/column ports.
class DiagramBuilder {
public:
    struct Mat {
        PortRef row, col;
    };
    struct Vec {
        PortRef port;
    };
    struct Block {
        PortRef row_outer, col_outer, row_inner, col_inner;
    };

    Mat matrix(Tensor t, std::string name);
    Vec vector(Tensor t, std::string name);
    Block block(Tensor t, std::string name); // rank-4 dense leaf

    /// Identity matrix as a bare rank-2 delta.
    Mat identity(std::size_t dim);

    Mat dot(Mat a, Mat b);
    Mat kron(Mat a, Mat b);
    Mat hadamard(Mat a, Mat b);
    Mat khatri_rao_col(Mat a, Mat b);
    Mat khatri_rao_row(Mat a, Mat b);
    Mat tracy_singh(Block a, Block b);
    Block block_dot(Block a, Block b);

    Mat transpose(Mat a) { return {a.col, a.row}; }
    Vec col(Mat a);
    Vec row(Mat a);
    Mat outer(Vec u, Vec v) { return {u.port, v.port}; }
    Vec diag(Mat a);
    Mat diag_embed(Vec v);
    Vec hadamard(Vec a, Vec b);
    Vec apply(Mat m, Vec v); // matrix times column vector

    /// Close row onto column (trace); the fragment becomes scalar.
    void close(Mat m);

    std::size_t extent(PortRef p) const { return nodes_[p.node].port_extent(p.port); }

    Diagram finish(std::vector<PortRef> outputs);
    Diagram finish(Mat m) { return finish(std::vector<PortRef>{m.row, m.col}); }
    Diagram finish(Vec v) { return finish(std::vector<PortRef>{v.port}); }

private:
    std::size_t add(Node n);
    void wire(PortRef a, PortRef b) { wires_.push_back({a, b}); }

    std::vector<Node> nodes_;
    std::vector<Wire> wires_;
};

} // namespace tcalc
