#include "tcalc/diagram_build.hpp"

namespace tcalc {

std::size_t DiagramBuilder::add(Node n) {
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
}

DiagramBuilder::Mat DiagramBuilder::matrix(Tensor t, std::string name) {
    if (t.rank() != 2) throw DiagramError("matrix fragment needs a rank-2 tensor");
    const std::size_t id = add(Node::make_dense(std::move(t), std::move(name)));
    return {{id, 0}, {id, 1}};
}

DiagramBuilder::Vec DiagramBuilder::vector(Tensor t, std::string name) {
    if (t.rank() != 1) throw DiagramError("vector fragment needs a rank-1 tensor");
    const std::size_t id = add(Node::make_dense(std::move(t), std::move(name)));
    return {{id, 0}};
}

DiagramBuilder::Block DiagramBuilder::block(Tensor t, std::string name) {
    if (t.rank() != 4) throw DiagramError("block fragment needs a rank-4 tensor");
    const std::size_t id = add(Node::make_dense(std::move(t), std::move(name)));
    return {{id, 0}, {id, 1}, {id, 2}, {id, 3}};
}

DiagramBuilder::Mat DiagramBuilder::identity(std::size_t dim) {
    const std::size_t id = add(Node::make_delta(2, dim));
    return {{id, 0}, {id, 1}};
}

DiagramBuilder::Mat DiagramBuilder::dot(Mat a, Mat b) {
    wire(a.col, b.row);
    return {a.row, b.col};
}

DiagramBuilder::Mat DiagramBuilder::kron(Mat a, Mat b) {
    const std::size_t gr = add(Node::make_gamma({extent(a.row), extent(b.row)}));
    wire(a.row, {gr, 0});
    wire(b.row, {gr, 1});
    const std::size_t gc = add(Node::make_gamma({extent(a.col), extent(b.col)}));
    wire(a.col, {gc, 0});
    wire(b.col, {gc, 1});
    return {{gr, 2}, {gc, 2}};
}

DiagramBuilder::Mat DiagramBuilder::hadamard(Mat a, Mat b) {
    const std::size_t dr = add(Node::make_delta(3, extent(a.row)));
    wire(a.row, {dr, 0});
    wire(b.row, {dr, 1});
    const std::size_t dc = add(Node::make_delta(3, extent(a.col)));
    wire(a.col, {dc, 0});
    wire(b.col, {dc, 1});
    return {{dr, 2}, {dc, 2}};
}

DiagramBuilder::Mat DiagramBuilder::khatri_rao_col(Mat a, Mat b) {
    const std::size_t gr = add(Node::make_gamma({extent(a.row), extent(b.row)}));
    wire(a.row, {gr, 0});
    wire(b.row, {gr, 1});
    const std::size_t dc = add(Node::make_delta(3, extent(a.col)));
    wire(a.col, {dc, 0});
    wire(b.col, {dc, 1});
    return {{gr, 2}, {dc, 2}};
}

DiagramBuilder::Mat DiagramBuilder::khatri_rao_row(Mat a, Mat b) {
    const std::size_t dr = add(Node::make_delta(3, extent(a.row)));
    wire(a.row, {dr, 0});
    wire(b.row, {dr, 1});
    const std::size_t gc = add(Node::make_gamma({extent(a.col), extent(b.col)}));
    wire(a.col, {gc, 0});
    wire(b.col, {gc, 1});
    return {{dr, 2}, {gc, 2}};
}

DiagramBuilder::Mat DiagramBuilder::tracy_singh(Block a, Block b) {
    const std::size_t gr = add(Node::make_gamma({extent(a.row_outer), extent(b.row_outer),
                                                 extent(a.row_inner), extent(b.row_inner)}));
    wire(a.row_outer, {gr, 0});
    wire(b.row_outer, {gr, 1});
    wire(a.row_inner, {gr, 2});
    wire(b.row_inner, {gr, 3});
    const std::size_t gc = add(Node::make_gamma({extent(a.col_outer), extent(b.col_outer),
                                                 extent(a.col_inner), extent(b.col_inner)}));
    wire(a.col_outer, {gc, 0});
    wire(b.col_outer, {gc, 1});
    wire(a.col_inner, {gc, 2});
    wire(b.col_inner, {gc, 3});
    return {{gr, 4}, {gc, 4}};
}

DiagramBuilder::Block DiagramBuilder::block_dot(Block a, Block b) {
    wire(a.col_outer, b.row_outer);
    wire(a.col_inner, b.row_inner);
    return {a.row_outer, b.col_outer, a.row_inner, b.col_inner};
}

DiagramBuilder::Vec DiagramBuilder::col(Mat a) {
    const std::size_t g = add(Node::make_gamma({extent(a.row), extent(a.col)}));
    wire(a.row, {g, 0});
    wire(a.col, {g, 1});
    return {{g, 2}};
}

DiagramBuilder::Vec DiagramBuilder::row(Mat a) {
    const std::size_t g = add(Node::make_gamma({extent(a.col), extent(a.row)}));
    wire(a.col, {g, 0});
    wire(a.row, {g, 1});
    return {{g, 2}};
}

DiagramBuilder::Vec DiagramBuilder::diag(Mat a) {
    const std::size_t d = add(Node::make_delta(3, extent(a.row)));
    wire(a.row, {d, 0});
    wire(a.col, {d, 1});
    return {{d, 2}};
}

DiagramBuilder::Mat DiagramBuilder::diag_embed(Vec v) {
    const std::size_t d = add(Node::make_delta(3, extent(v.port)));
    wire(v.port, {d, 0});
    return {{d, 1}, {d, 2}};
}

DiagramBuilder::Vec DiagramBuilder::hadamard(Vec a, Vec b) {
    const std::size_t d = add(Node::make_delta(3, extent(a.port)));
    wire(a.port, {d, 0});
    wire(b.port, {d, 1});
    return {{d, 2}};
}

DiagramBuilder::Vec DiagramBuilder::apply(Mat m, Vec v) {
    wire(m.col, v.port);
    return {m.row};
}

void DiagramBuilder::close(Mat m) { wire(m.row, m.col); }

Diagram DiagramBuilder::finish(std::vector<PortRef> outputs) {
    return build(std::move(nodes_), std::move(wires_), std::move(outputs));
}

} // namespace tcalc
