#pragma once

#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "tcalc/einsum.hpp"
#include "tcalc/mediators.hpp"
#include "tcalc/tensor.hpp"

namespace tcalc {

enum class NodeType { dense, delta, gamma, chi, fourier };

/// One tensor in a diagram: either a dense payload or a structured
/// mediator known by its parameters.
struct Node {
    NodeType kind = NodeType::dense;
    std::string name;                        // dense label (DOT export)
    Tensor dense;                            // dense payload
    std::size_t delta_rank = 0;
    std::size_t dim = 0;                     // delta/chi/fourier extent
    std::vector<std::size_t> gamma_dims;
    Signature chi_sig{1, 1, 1};
    FourierDirection direction = FourierDirection::forward;

    static Node make_dense(Tensor t, std::string name = "T");
    static Node make_delta(std::size_t rank, std::size_t dim);
    static Node make_gamma(std::vector<std::size_t> dims);
    static Node make_chi(Signature sig, std::size_t dim);
    static Node make_fourier(std::size_t dim, FourierDirection dir);

    std::size_t port_count() const;
    std::size_t port_extent(std::size_t port) const;

    /// Dense form of this node (materializes mediators, cap-checked).
    Tensor materialize(std::size_t cap) const;

    bool operator==(const Node& other) const;
};

struct PortRef {
    std::size_t node;
    std::size_t port;
    auto operator<=>(const PortRef&) const = default;
};

using Wire = std::pair<PortRef, PortRef>;

/// Multigraph of tensor nodes. Every port lies on exactly one wire or holds
/// exactly one slot in the free-port list (the output index order).
/// Diagrams are immutable; rewrites return new diagrams. `scale` is a real
/// factor accumulated by scale-emitting rewrite rules.
class Diagram {
public:
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Wire>& wires() const { return wires_; }
    const std::vector<PortRef>& free_ports() const { return free_; }
    double scale() const { return scale_; }

    friend Diagram build(std::vector<Node> nodes, std::vector<Wire> wires,
                         std::vector<PortRef> free_order, double scale);

private:
    std::vector<Node> nodes_;
    std::vector<Wire> wires_;
    std::vector<PortRef> free_;
    double scale_ = 1.0;
};

/// Validate and construct. Throws DiagramError for an empty node list,
/// dangling ports, port reuse, or wires joining unequal extents.
Diagram build(std::vector<Node> nodes, std::vector<Wire> wires, std::vector<PortRef> free_order,
              double scale = 1.0);

/// Contract the whole diagram to a tensor: einsum over the dense forms of
/// the nodes, free ports as output axes, times the accumulated scale.
/// Delta nodes are never materialized; they merge the labels of their
/// wires. Gamma/chi/Fourier nodes materialize under opts.dense_cap.
Tensor evaluate(const Diagram& d, const EvalOptions& opts = {});

struct RewriteOutcome {
    bool applied = false;
    Diagram diagram;
    std::string note; // "no-match", "dims-list-mismatch", ... when not applied
};

/// Fuse two Delta nodes sharing at least one wire (or close a Delta's
/// self-loop) into one Delta over the leftover ports; full closure emits a
/// factor D into the scale.
RewriteOutcome rewrite_fuse_delta(const Diagram& d);

/// Fuse two Gamma nodes with identical dims lists: joined flat-to-flat they
/// become per-input identity wires; joined on all inputs (position-matched)
/// they become one flat identity wire.
RewriteOutcome rewrite_fuse_gamma(const Diagram& d);

enum class SwapDirection { forward, reverse };

/// The delta/gamma exchange: a Delta of rank N+1 and extent M wired to the
/// flat ports of N identical Gamma nodes (M = product of their dims)
/// becomes one rank-(N+1) Delta per input position feeding a single Gamma
/// on the transposed wire bundle. `reverse` applies the rule right to left.
RewriteOutcome rewrite_swap_delta_gamma(const Diagram& d,
                                        SwapDirection dir = SwapDirection::forward);

/// A Chi node whose three wires are contracted by Fourier nodes matching
/// the signature pattern (forward on +, inverse on -, or the global flip)
/// collapses to Delta(3,D); the scale gains sqrt(D).
RewriteOutcome rewrite_chi_fourier(const Diagram& d);

/// Fixpoint driver: fuse_delta, fuse_gamma, swap (only when it strictly
/// shrinks the node count), chi_fourier, in that order, lowest node ids
/// first, until nothing fires. Value-preserving including scale.
Diagram simplify(const Diagram& d);

/// Deterministic GraphViz text; free ports appear as labelled terminals.
std::string to_dot(const Diagram& d);

bool structurally_equal(const Diagram& a, const Diagram& b);

} // namespace tcalc
