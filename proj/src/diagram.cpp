#include "tcalc/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace tcalc {

// ---------------------------------------------------------------------------
// Node
// ---------------------------------------------------------------------------

Node Node::make_dense(Tensor t, std::string name) {
    Node n;
    n.kind = NodeType::dense;
    n.dense = std::move(t);
    n.name = std::move(name);
    return n;
}

Node Node::make_delta(std::size_t rank, std::size_t dim) {
    if (rank < 1 || dim < 1) throw DiagramError("delta node: rank and dim must be >= 1");
    Node n;
    n.kind = NodeType::delta;
    n.delta_rank = rank;
    n.dim = dim;
    return n;
}

Node Node::make_gamma(std::vector<std::size_t> dims) {
    if (dims.empty()) throw DiagramError("gamma node: needs at least one input dim");
    for (std::size_t e : dims)
        if (e < 1) throw DiagramError("gamma node: extents must be >= 1");
    Node n;
    n.kind = NodeType::gamma;
    n.gamma_dims = std::move(dims);
    return n;
}

Node Node::make_chi(Signature sig, std::size_t dim) {
    if (dim < 1) throw DiagramError("chi node: dim must be >= 1");
    Node n;
    n.kind = NodeType::chi;
    n.chi_sig = sig;
    n.dim = dim;
    return n;
}

Node Node::make_fourier(std::size_t dim, FourierDirection dir) {
    if (dim < 1) throw DiagramError("fourier node: dim must be >= 1");
    Node n;
    n.kind = NodeType::fourier;
    n.dim = dim;
    n.direction = dir;
    return n;
}

std::size_t Node::port_count() const {
    switch (kind) {
        case NodeType::dense: return dense.rank();
        case NodeType::delta: return delta_rank;
        case NodeType::gamma: return gamma_dims.size() + 1;
        case NodeType::chi: return 3;
        case NodeType::fourier: return 2;
    }
    return 0;
}

std::size_t Node::port_extent(std::size_t port) const {
    switch (kind) {
        case NodeType::dense: return dense.shape()[port];
        case NodeType::delta: return dim;
        case NodeType::gamma:
            return port < gamma_dims.size() ? gamma_dims[port]
                                            : GammaSpec{gamma_dims}.output_dim();
        case NodeType::chi: return dim;
        case NodeType::fourier: return dim;
    }
    return 0;
}

Tensor Node::materialize(std::size_t cap) const {
    switch (kind) {
        case NodeType::dense: return dense;
        case NodeType::delta: return delta_dense(delta_rank, dim, cap);
        case NodeType::gamma: return gamma_dense(gamma_dims, cap);
        case NodeType::chi: return chi_dense(chi_sig, dim, cap);
        case NodeType::fourier: return fourier_matrix(dim, direction);
    }
    throw DiagramError("unknown node kind");
}

static bool tensor_bits_equal(const Tensor& a, const Tensor& b) {
    if (a.shape() != b.shape() || a.dtype() != b.dtype()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.at(i) != b.at(i)) return false;
    return true;
}

bool Node::operator==(const Node& other) const {
    if (kind != other.kind) return false;
    switch (kind) {
        case NodeType::dense: return name == other.name && tensor_bits_equal(dense, other.dense);
        case NodeType::delta: return delta_rank == other.delta_rank && dim == other.dim;
        case NodeType::gamma: return gamma_dims == other.gamma_dims;
        case NodeType::chi: return chi_sig == other.chi_sig && dim == other.dim;
        case NodeType::fourier: return dim == other.dim && direction == other.direction;
    }
    return false;
}

// ---------------------------------------------------------------------------
// build & validation
// ---------------------------------------------------------------------------

Diagram build(std::vector<Node> nodes, std::vector<Wire> wires, std::vector<PortRef> free_order,
              double scale) {
    if (nodes.empty()) throw DiagramError("empty diagram");

    auto check_ref = [&](const PortRef& p) {
        if (p.node >= nodes.size())
            throw DiagramError("port reference to missing node " + std::to_string(p.node));
        if (p.port >= nodes[p.node].port_count())
            throw DiagramError("port reference to missing port " + std::to_string(p.port) +
                               " of node " + std::to_string(p.node));
    };

    std::map<PortRef, int> uses;
    for (auto& [pa, pb] : wires) {
        check_ref(pa);
        check_ref(pb);
        const std::size_t ea = nodes[pa.node].port_extent(pa.port);
        const std::size_t eb = nodes[pb.node].port_extent(pb.port);
        if (ea != eb)
            throw DiagramError("wire joins extents " + std::to_string(ea) + " and " +
                               std::to_string(eb));
        ++uses[pa];
        ++uses[pb];
        if (pb < pa) std::swap(pa, pb); // canonical wire orientation
    }
    for (const PortRef& p : free_order) {
        check_ref(p);
        ++uses[p];
    }

    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t p = 0; p < nodes[i].port_count(); ++p) {
            auto it = uses.find(PortRef{i, p});
            const int n = it == uses.end() ? 0 : it->second;
            if (n == 0)
                throw DiagramError("dangling port " + std::to_string(p) + " of node " +
                                   std::to_string(i));
            if (n > 1)
                throw DiagramError("port " + std::to_string(p) + " of node " +
                                   std::to_string(i) + " used " + std::to_string(n) + " times");
        }

    Diagram d;
    d.nodes_ = std::move(nodes);
    d.wires_ = std::move(wires);
    d.free_ = std::move(free_order);
    d.scale_ = scale;
    return d;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

Tensor evaluate(const Diagram& d, const EvalOptions& opts) {
    // one label per wire and per free slot
    std::map<PortRef, int> edge_of;
    int next = 0;
    for (const auto& [pa, pb] : d.wires()) {
        edge_of[pa] = next;
        edge_of[pb] = next;
        ++next;
    }
    std::vector<int> free_edges;
    for (const PortRef& p : d.free_ports()) {
        edge_of[p] = next;
        free_edges.push_back(next);
        ++next;
    }

    // delta nodes merge the labels of everything they touch
    std::vector<int> parent(static_cast<std::size_t>(next));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (std::size_t i = 0; i < d.nodes().size(); ++i) {
        const Node& node = d.nodes()[i];
        if (node.kind != NodeType::delta) continue;
        const int root = find(edge_of.at(PortRef{i, 0}));
        for (std::size_t p = 1; p < node.port_count(); ++p)
            parent[static_cast<std::size_t>(find(edge_of.at(PortRef{i, p})))] = root;
    }

    IndexSpec spec;
    std::vector<Tensor> ops;
    std::set<int> operand_labels;
    for (std::size_t i = 0; i < d.nodes().size(); ++i) {
        const Node& node = d.nodes()[i];
        if (node.kind == NodeType::delta) continue;
        ops.push_back(node.materialize(opts.dense_cap));
        std::vector<int> labels;
        for (std::size_t p = 0; p < node.port_count(); ++p)
            labels.push_back(find(edge_of.at(PortRef{i, p})));
        operand_labels.insert(labels.begin(), labels.end());
        spec.operands.push_back(std::move(labels));
    }
    for (int e : free_edges) spec.output.push_back(find(e));

    // a label class seen only by delta nodes still needs a carrier: a vector
    // of ones sums it (closed loops become a factor D, free ports broadcast)
    std::set<int> inserted;
    for (std::size_t i = 0; i < d.nodes().size(); ++i) {
        const Node& node = d.nodes()[i];
        if (node.kind != NodeType::delta) continue;
        for (std::size_t p = 0; p < node.port_count(); ++p) {
            const int cls = find(edge_of.at(PortRef{i, p}));
            if (!operand_labels.count(cls) && !inserted.count(cls)) {
                ops.push_back(Tensor::ones({node.dim}));
                spec.operands.push_back({cls});
                inserted.insert(cls);
            }
        }
    }

    Tensor result = einsum_eval(spec, ops, opts);
    if (d.scale() != 1.0) {
        if (result.is_complex())
            for (std::size_t i = 0; i < result.size(); ++i) result.cdata()[i] *= d.scale();
        else
            for (std::size_t i = 0; i < result.size(); ++i) result.rdata()[i] *= d.scale();
    }
    return result;
}

// ---------------------------------------------------------------------------
// Edge-list working form for the rewrites
// ---------------------------------------------------------------------------

namespace {

struct EForm {
    std::vector<Node> payload;
    std::vector<std::vector<int>> ports; // edge id per port
    std::vector<int> free;               // edge ids in output order
    std::vector<std::size_t> extents;    // per edge id
    double scale = 1.0;

    int fresh(std::size_t extent) {
        extents.push_back(extent);
        return static_cast<int>(extents.size()) - 1;
    }

    void replace_edge(int from, int to) {
        for (auto& pl : ports)
            for (int& e : pl)
                if (e == from) e = to;
        for (int& e : free)
            if (e == from) e = to;
    }

    // merge two wire stubs left behind by removed nodes; identical stubs
    // close a loop worth a factor of the extent
    void merge(int a, int b) {
        if (a == b)
            scale *= static_cast<double>(extents[static_cast<std::size_t>(a)]);
        else
            replace_edge(b, a);
    }

    void remove_nodes(std::vector<std::size_t> ids) {
        std::sort(ids.rbegin(), ids.rend());
        for (std::size_t id : ids) {
            payload.erase(payload.begin() + static_cast<std::ptrdiff_t>(id));
            ports.erase(ports.begin() + static_cast<std::ptrdiff_t>(id));
        }
    }

    // other node-port endpoint of edge e, excluding (node, port); {-1,-1}
    // when the far side is a free slot
    std::pair<int, int> far_end(int e, std::size_t node, std::size_t port) const {
        for (std::size_t i = 0; i < ports.size(); ++i)
            for (std::size_t p = 0; p < ports[i].size(); ++p)
                if (ports[i][p] == e && !(i == node && p == port))
                    return {static_cast<int>(i), static_cast<int>(p)};
        return {-1, -1};
    }
};

EForm to_eform(const Diagram& d) {
    EForm e;
    e.payload = d.nodes();
    e.scale = d.scale();
    e.ports.resize(d.nodes().size());
    for (std::size_t i = 0; i < d.nodes().size(); ++i)
        e.ports[i].assign(d.nodes()[i].port_count(), -1);

    for (const auto& [pa, pb] : d.wires()) {
        const int id = e.fresh(d.nodes()[pa.node].port_extent(pa.port));
        e.ports[pa.node][pa.port] = id;
        e.ports[pb.node][pb.port] = id;
    }
    for (const PortRef& p : d.free_ports()) {
        const int id = e.fresh(d.nodes()[p.node].port_extent(p.port));
        e.ports[p.node][p.port] = id;
        e.free.push_back(id);
    }
    return e;
}

Diagram from_eform(EForm e) {
    // a fully closed diagram keeps a unit scalar node so the loop factors in
    // the scale still have something to multiply
    if (e.payload.empty()) {
        e.payload.push_back(Node::make_dense(Tensor::scalar(1.0), "1"));
        e.ports.push_back({});
    }

    // a merged edge can end with both endpoints in the free list; that is a
    // bare identity wire, which the node/wire model spells delta(2, D)
    std::map<int, int> free_count;
    for (int id : e.free) ++free_count[id];
    for (auto& [id, count] : free_count) {
        if (count < 2) continue;
        e.payload.push_back(Node::make_delta(2, e.extents[static_cast<std::size_t>(id)]));
        e.ports.push_back({});
        std::size_t assigned = 0;
        for (int& fe : e.free)
            if (fe == id && assigned < 2) {
                const int nid = e.fresh(e.extents[static_cast<std::size_t>(id)]);
                e.ports.back().push_back(nid);
                fe = nid;
                ++assigned;
            }
    }

    std::map<int, std::vector<PortRef>> ends;
    for (std::size_t i = 0; i < e.ports.size(); ++i)
        for (std::size_t p = 0; p < e.ports[i].size(); ++p)
            ends[e.ports[i][p]].push_back(PortRef{i, p});

    std::vector<Wire> wires;
    for (auto& [id, ps] : ends)
        if (ps.size() == 2) wires.push_back({ps[0], ps[1]});

    std::vector<PortRef> free_refs;
    for (int id : e.free) {
        const auto& ps = ends.at(id);
        if (ps.size() != 1) throw DiagramError("internal: free edge with wrong endpoint count");
        free_refs.push_back(ps[0]);
    }
    return build(std::move(e.payload), std::move(wires), std::move(free_refs), e.scale);
}

std::vector<int> without(const std::vector<int>& edges, const std::set<int>& drop) {
    std::vector<int> out;
    for (int e : edges)
        if (!drop.count(e)) out.push_back(e);
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Rewrites
// ---------------------------------------------------------------------------

RewriteOutcome rewrite_fuse_delta(const Diagram& d) {
    EForm e = to_eform(d);
    const std::size_t n = e.payload.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (e.payload[i].kind != NodeType::delta) continue;
        const std::size_t dim = e.payload[i].dim;

        // self-loop: two ports of the same delta on one wire
        for (std::size_t p = 0; p < e.ports[i].size(); ++p)
            for (std::size_t q = p + 1; q < e.ports[i].size(); ++q)
                if (e.ports[i][p] == e.ports[i][q]) {
                    std::vector<int> leftover;
                    for (std::size_t r = 0; r < e.ports[i].size(); ++r)
                        if (r != p && r != q) leftover.push_back(e.ports[i][r]);
                    if (leftover.empty()) {
                        e.remove_nodes({i});
                        e.scale *= static_cast<double>(dim);
                    } else {
                        e.payload[i] = Node::make_delta(leftover.size(), dim);
                        e.ports[i] = std::move(leftover);
                    }
                    return {true, from_eform(std::move(e)), "closed delta self-loop"};
                }

        for (std::size_t j = i + 1; j < n; ++j) {
            if (e.payload[j].kind != NodeType::delta) continue;
            std::set<int> shared;
            for (int ei : e.ports[i])
                for (int ej : e.ports[j])
                    if (ei == ej) shared.insert(ei);
            if (shared.empty()) continue;

            std::vector<int> leftover = without(e.ports[i], shared);
            for (int ej : without(e.ports[j], shared)) leftover.push_back(ej);
            if (leftover.empty()) {
                e.remove_nodes({i, j});
                e.scale *= static_cast<double>(dim);
            } else {
                e.payload[i] = Node::make_delta(leftover.size(), dim);
                e.ports[i] = std::move(leftover);
                e.remove_nodes({j});
            }
            return {true, from_eform(std::move(e)), "fused delta pair"};
        }
    }
    return {false, d, "no-match"};
}

RewriteOutcome rewrite_fuse_gamma(const Diagram& d) {
    EForm e = to_eform(d);
    const std::size_t n = e.payload.size();
    bool saw_mismatch = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (e.payload[i].kind != NodeType::gamma) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (e.payload[j].kind != NodeType::gamma) continue;
            const auto& di = e.payload[i].gamma_dims;
            const auto& dj = e.payload[j].gamma_dims;
            const int flat_i = e.ports[i].back();
            const int flat_j = e.ports[j].back();

            if (flat_i == flat_j) {
                if (di != dj) {
                    saw_mismatch = true;
                    continue;
                }
                // flat-to-flat: per-input identity wires
                std::vector<int> in_i(e.ports[i].begin(), e.ports[i].end() - 1);
                std::vector<int> in_j(e.ports[j].begin(), e.ports[j].end() - 1);
                e.remove_nodes({i, j});
                for (std::size_t w = 0; w < in_i.size(); ++w) {
                    const int keep = in_i[w];
                    const int drop = in_j[w];
                    e.merge(keep, drop);
                    if (keep != drop)
                        for (std::size_t w2 = w + 1; w2 < in_i.size(); ++w2) {
                            if (in_i[w2] == drop) in_i[w2] = keep;
                            if (in_j[w2] == drop) in_j[w2] = keep;
                        }
                }
                return {true, from_eform(std::move(e)), "fused gamma pair over flat port"};
            }

            if (di == dj && !di.empty()) {
                bool all_inputs = true;
                for (std::size_t w = 0; w < di.size(); ++w)
                    if (e.ports[i][w] != e.ports[j][w]) all_inputs = false;
                if (all_inputs) {
                    // joined on every input: one flat identity wire
                    e.remove_nodes({i, j});
                    e.merge(flat_i, flat_j);
                    return {true, from_eform(std::move(e)), "fused gamma pair over inputs"};
                }
            }
        }
    }
    if (saw_mismatch) return {false, d, "dims-list-mismatch"};
    return {false, d, "no-match"};
}

RewriteOutcome rewrite_swap_delta_gamma(const Diagram& d, SwapDirection dir) {
    EForm e = to_eform(d);
    const std::size_t n = e.payload.size();

    if (dir == SwapDirection::forward) {
        for (std::size_t i = 0; i < n; ++i) {
            if (e.payload[i].kind != NodeType::delta) continue;
            const std::size_t m_dim = e.payload[i].dim;

            std::vector<std::size_t> gammas; // matched gamma node per delta port
            std::vector<int> leftover;
            bool ok = true;
            for (std::size_t p = 0; p < e.ports[i].size() && ok; ++p) {
                const auto [fj, fq] = e.far_end(e.ports[i][p], i, p);
                if (fj >= 0 && static_cast<std::size_t>(fj) != i &&
                    e.payload[static_cast<std::size_t>(fj)].kind == NodeType::gamma &&
                    static_cast<std::size_t>(fq) ==
                        e.payload[static_cast<std::size_t>(fj)].gamma_dims.size()) {
                    gammas.push_back(static_cast<std::size_t>(fj));
                } else {
                    leftover.push_back(e.ports[i][p]);
                }
            }
            if (!ok || leftover.size() != 1 || gammas.size() != e.ports[i].size() - 1 ||
                gammas.empty())
                continue;
            const std::vector<std::size_t> dims = e.payload[gammas[0]].gamma_dims;
            bool same = GammaSpec{dims}.output_dim() == m_dim;
            for (std::size_t g : gammas)
                if (e.payload[g].gamma_dims != dims) same = false;
            std::set<std::size_t> distinct(gammas.begin(), gammas.end());
            if (!same || distinct.size() != gammas.size()) continue;

            const std::size_t copies = gammas.size(); // N
            if (copies == 1) {
                // rank-2 delta is an identity wire; splice it out
                const int flat_edge = e.ports[gammas[0]].back();
                const int other = leftover[0];
                e.remove_nodes({i});
                e.merge(other, flat_edge);
                return {true, from_eform(std::move(e)), "spliced identity delta"};
            }

            const std::size_t k_inputs = dims.size();
            std::vector<std::vector<int>> in(copies); // per copy: input edges
            for (std::size_t w = 0; w < copies; ++w)
                in[w] = std::vector<int>(e.ports[gammas[w]].begin(),
                                         e.ports[gammas[w]].end() - 1);
            const int bundle_edge = leftover[0];

            std::vector<std::size_t> dead = gammas;
            dead.push_back(i);
            e.remove_nodes(dead);

            std::vector<int> new_gamma_ports;
            for (std::size_t k = 0; k < k_inputs; ++k) {
                std::vector<int> dports;
                for (std::size_t w = 0; w < copies; ++w) dports.push_back(in[w][k]);
                const int link = e.fresh(dims[k]);
                dports.push_back(link);
                e.payload.push_back(Node::make_delta(copies + 1, dims[k]));
                e.ports.push_back(std::move(dports));
                new_gamma_ports.push_back(link);
            }
            new_gamma_ports.push_back(bundle_edge);
            e.payload.push_back(Node::make_gamma(dims));
            e.ports.push_back(std::move(new_gamma_ports));
            return {true, from_eform(std::move(e)), "swapped delta through gammas"};
        }
        return {false, d, "no-match"};
    }

    // reverse direction: per-input deltas feeding one gamma become one
    // bundle delta on N gamma copies
    for (std::size_t i = 0; i < n; ++i) {
        if (e.payload[i].kind != NodeType::gamma) continue;
        const std::vector<std::size_t> dims = e.payload[i].gamma_dims;
        const std::size_t k_inputs = dims.size();

        std::vector<std::size_t> deltas;
        std::vector<std::size_t> via_port;
        bool ok = true;
        for (std::size_t k = 0; k < k_inputs && ok; ++k) {
            const auto [fj, fq] = e.far_end(e.ports[i][k], i, k);
            if (fj < 0 || static_cast<std::size_t>(fj) == i ||
                e.payload[static_cast<std::size_t>(fj)].kind != NodeType::delta) {
                ok = false;
                break;
            }
            deltas.push_back(static_cast<std::size_t>(fj));
            via_port.push_back(static_cast<std::size_t>(fq));
        }
        if (!ok || deltas.empty()) continue;
        std::set<std::size_t> distinct(deltas.begin(), deltas.end());
        if (distinct.size() != deltas.size()) continue;
        const std::size_t rank = e.payload[deltas[0]].delta_rank;
        if (rank < 2) continue;
        bool same = true;
        for (std::size_t k = 0; k < k_inputs; ++k) {
            if (e.payload[deltas[k]].delta_rank != rank) same = false;
            if (e.payload[deltas[k]].dim != dims[k]) same = false;
        }
        if (!same) continue;
        const std::size_t copies = rank - 1; // N

        // per input k, the delta's remaining edges in port order
        std::vector<std::vector<int>> rest(k_inputs);
        for (std::size_t k = 0; k < k_inputs; ++k)
            for (std::size_t p = 0; p < e.ports[deltas[k]].size(); ++p)
                if (p != via_port[k]) rest[k].push_back(e.ports[deltas[k]][p]);
        const int old_flat = e.ports[i].back();
        const std::size_t m_dim = GammaSpec{dims}.output_dim();

        std::vector<std::size_t> dead = deltas;
        dead.push_back(i);
        e.remove_nodes(dead);

        std::vector<int> bundle_ports;
        for (std::size_t w = 0; w < copies; ++w) {
            std::vector<int> gports;
            for (std::size_t k = 0; k < k_inputs; ++k) gports.push_back(rest[k][w]);
            const int link = e.fresh(m_dim);
            gports.push_back(link);
            e.payload.push_back(Node::make_gamma(dims));
            e.ports.push_back(std::move(gports));
            bundle_ports.push_back(link);
        }
        bundle_ports.push_back(old_flat);
        e.payload.push_back(Node::make_delta(copies + 1, m_dim));
        e.ports.push_back(std::move(bundle_ports));
        return {true, from_eform(std::move(e)), "swapped gammas through delta"};
    }
    return {false, d, "no-match"};
}

RewriteOutcome rewrite_chi_fourier(const Diagram& d) {
    EForm e = to_eform(d);
    const std::size_t n = e.payload.size();
    bool saw_pattern_mismatch = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (e.payload[i].kind != NodeType::chi) continue;
        const Signature sig = e.payload[i].chi_sig;
        const std::size_t dim = e.payload[i].dim;

        std::vector<std::size_t> fs;
        std::vector<int> far;
        bool ok = true;
        for (std::size_t w = 0; w < 3 && ok; ++w) {
            const auto [fj, fq] = e.far_end(e.ports[i][w], i, w);
            if (fj < 0 || static_cast<std::size_t>(fj) == i ||
                e.payload[static_cast<std::size_t>(fj)].kind != NodeType::fourier) {
                ok = false;
                break;
            }
            fs.push_back(static_cast<std::size_t>(fj));
            far.push_back(e.ports[static_cast<std::size_t>(fj)][1 - static_cast<std::size_t>(fq)]);
        }
        if (!ok) continue;
        std::set<std::size_t> distinct(fs.begin(), fs.end());
        if (distinct.size() != 3) continue;

        bool plain = true, flipped = true;
        for (std::size_t w = 0; w < 3; ++w) {
            const bool fwd = e.payload[fs[w]].direction == FourierDirection::forward;
            const bool plus = sig.sign(w) > 0;
            plain = plain && (fwd == plus);
            flipped = flipped && (fwd != plus);
        }
        if (!plain && !flipped) {
            saw_pattern_mismatch = true;
            continue;
        }

        std::vector<std::size_t> dead = fs;
        dead.push_back(i);
        e.remove_nodes(dead);
        e.payload.push_back(Node::make_delta(3, dim));
        e.ports.push_back(far);
        e.scale *= std::sqrt(static_cast<double>(dim));
        return {true, from_eform(std::move(e)), "chi conjugated to delta"};
    }
    if (saw_pattern_mismatch) return {false, d, "direction-pattern-mismatch"};
    return {false, d, "no-match"};
}

Diagram simplify(const Diagram& d0) {
    Diagram d = d0;
    while (true) {
        RewriteOutcome r = rewrite_fuse_delta(d);
        if (!r.applied) r = rewrite_fuse_gamma(d);
        if (!r.applied) {
            RewriteOutcome s = rewrite_swap_delta_gamma(d);
            if (s.applied && s.diagram.nodes().size() < d.nodes().size()) r = std::move(s);
        }
        if (!r.applied) r = rewrite_chi_fourier(d);
        if (!r.applied) break;
        d = std::move(r.diagram);
    }
    return d;
}

// ---------------------------------------------------------------------------
// DOT export & structural comparison
// ---------------------------------------------------------------------------

static std::string node_label(const Node& n) {
    std::ostringstream os;
    switch (n.kind) {
        case NodeType::dense: os << n.name << n.dense.shape_str(); break;
        case NodeType::delta: os << "δ" << n.delta_rank << "[" << n.dim << "]"; break;
        case NodeType::gamma: {
            os << "γ[";
            for (std::size_t k = 0; k < n.gamma_dims.size(); ++k)
                os << (k ? "," : "") << n.gamma_dims[k];
            os << "]";
            break;
        }
        case NodeType::chi: os << "χ" << n.chi_sig.str() << "[" << n.dim << "]"; break;
        case NodeType::fourier:
            os << "F" << (n.direction == FourierDirection::inverse ? "inv" : "") << "[" << n.dim
               << "]";
            break;
    }
    return os.str();
}

std::string to_dot(const Diagram& d) {
    // rank-2 deltas are identity wires and draw as bare edges; everything
    // else is a labelled box. Chained identity nodes keep their boxes so
    // every edge endpoint stays declared.
    auto is_rank2_delta = [&](std::size_t i) {
        return d.nodes()[i].kind == NodeType::delta && d.nodes()[i].delta_rank == 2;
    };
    std::map<PortRef, PortRef> wired_to;
    for (const auto& [pa, pb] : d.wires()) {
        wired_to[pa] = pb;
        wired_to[pb] = pa;
    }
    auto is_wire_node = [&](std::size_t i) {
        if (!is_rank2_delta(i)) return false;
        for (std::size_t p = 0; p < 2; ++p) {
            auto it = wired_to.find(PortRef{i, p});
            if (it != wired_to.end() && is_rank2_delta(it->second.node)) return false;
        }
        return true;
    };
    auto endpoint = [&](const PortRef& p, std::size_t slot) {
        std::ostringstream os;
        if (slot != static_cast<std::size_t>(-1))
            os << "out" << slot;
        else
            os << "n" << p.node;
        return os.str();
    };

    // attachment of every port: either a wire peer or a free slot
    std::map<PortRef, std::pair<PortRef, std::size_t>> peer; // port -> (peer, slot)
    for (const auto& [pa, pb] : d.wires()) {
        peer[pa] = {pb, static_cast<std::size_t>(-1)};
        peer[pb] = {pa, static_cast<std::size_t>(-1)};
    }
    for (std::size_t s = 0; s < d.free_ports().size(); ++s)
        peer[d.free_ports()[s]] = {d.free_ports()[s], s};

    std::ostringstream os;
    os << "graph diagram {\n";
    for (std::size_t i = 0; i < d.nodes().size(); ++i)
        if (!is_wire_node(i))
            os << "  n" << i << " [label=\"" << node_label(d.nodes()[i]) << "\", shape=box];\n";
    for (std::size_t s = 0; s < d.free_ports().size(); ++s)
        os << "  out" << s << " [shape=plaintext];\n";

    std::vector<std::string> edges;
    auto edge_text = [&](const std::string& a, const std::string& b) {
        return "  " + (a <= b ? a + " -- " + b : b + " -- " + a) + ";\n";
    };
    std::vector<char> consumed(d.nodes().size(), 0);
    for (std::size_t i = 0; i < d.nodes().size(); ++i) {
        if (!is_wire_node(i)) continue;
        consumed[i] = 1;
        const auto [p0, s0] = peer.at(PortRef{i, 0});
        const auto [p1, s1] = peer.at(PortRef{i, 1});
        edges.push_back(edge_text(endpoint(p0, s0), endpoint(p1, s1)));
    }
    for (const auto& [pa, pb] : d.wires()) {
        if (consumed[pa.node] || consumed[pb.node]) continue;
        edges.push_back(edge_text(endpoint(pa, static_cast<std::size_t>(-1)),
                                  endpoint(pb, static_cast<std::size_t>(-1))));
    }
    for (std::size_t s = 0; s < d.free_ports().size(); ++s) {
        if (consumed[d.free_ports()[s].node]) continue;
        edges.push_back(edge_text(endpoint(d.free_ports()[s], static_cast<std::size_t>(-1)),
                                  "out" + std::to_string(s)));
    }
    std::sort(edges.begin(), edges.end());
    for (const std::string& e : edges) os << e;
    os << "}\n";
    return os.str();
}

bool structurally_equal(const Diagram& a, const Diagram& b) {
    if (a.nodes().size() != b.nodes().size()) return false;
    for (std::size_t i = 0; i < a.nodes().size(); ++i)
        if (!(a.nodes()[i] == b.nodes()[i])) return false;

    auto canon = [](const Diagram& d) {
        std::vector<Wire> ws = d.wires();
        for (auto& [pa, pb] : ws)
            if (pb < pa) std::swap(pa, pb);
        std::sort(ws.begin(), ws.end());
        return ws;
    };
    return canon(a) == canon(b) && a.free_ports() == b.free_ports() && a.scale() == b.scale();
}

} // namespace tcalc
