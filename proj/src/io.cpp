#include "tcalc/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tcalc::io {

using nlohmann::json;

namespace {

json tensor_to_obj(const Tensor& t) {
    json obj;
    obj["shape"] = t.shape();
    obj["dtype"] = t.is_complex() ? "c64" : "f64";
    json data = json::array();
    if (t.is_complex()) {
        for (std::size_t i = 0; i < t.size(); ++i)
            data.push_back(json::array({t.cdata()[i].real(), t.cdata()[i].imag()}));
    } else {
        for (std::size_t i = 0; i < t.size(); ++i) data.push_back(t.rdata()[i]);
    }
    obj["data"] = std::move(data);
    return obj;
}

double checked_number(const json& v, const LoadOptions& opts) {
    // non-finite values serialize as null, so a permissive load maps null
    // back to NaN
    if (v.is_null()) {
        if (opts.allow_nonfinite) return std::nan("");
        throw ParseError("tensor data contains a non-finite value (pass the permissive flag to "
                         "accept it)");
    }
    if (!v.is_number()) throw ParseError("tensor data entries must be numbers");
    const double x = v.get<double>();
    if (!opts.allow_nonfinite && !std::isfinite(x))
        throw ParseError("tensor data contains a non-finite value (pass the permissive flag to "
                         "accept it)");
    return x;
}

Tensor tensor_from_obj(const json& obj, const LoadOptions& opts) {
    if (!obj.is_object()) throw ParseError("tensor record must be a JSON object");
    if (!obj.contains("shape") || !obj.contains("dtype") || !obj.contains("data"))
        throw ParseError("tensor record needs \"shape\", \"dtype\" and \"data\"");

    std::vector<std::size_t> shape;
    for (const auto& v : obj.at("shape")) {
        if (!v.is_number_unsigned() || v.get<std::size_t>() == 0)
            throw ParseError("tensor shape entries must be positive integers");
        shape.push_back(v.get<std::size_t>());
    }
    const std::string dtype = obj.at("dtype").get<std::string>();
    const json& data = obj.at("data");
    if (!data.is_array()) throw ParseError("tensor data must be an array");

    if (dtype == "f64") {
        std::vector<double> values;
        values.reserve(data.size());
        for (const auto& v : data) values.push_back(checked_number(v, opts));
        return Tensor::from_real(std::move(shape), std::move(values));
    }
    if (dtype == "c64") {
        std::vector<cplx> values;
        values.reserve(data.size());
        for (const auto& v : data) {
            if (!v.is_array() || v.size() != 2)
                throw ParseError("c64 tensor data entries must be [re, im] pairs");
            values.emplace_back(checked_number(v[0], opts), checked_number(v[1], opts));
        }
        return Tensor::from_complex(std::move(shape), std::move(values));
    }
    throw ParseError("unknown dtype \"" + dtype + "\" (expected \"f64\" or \"c64\")");
}

json parse_text(const std::string& text) {
    json obj = json::parse(text, nullptr, false);
    if (obj.is_discarded()) throw ParseError("malformed JSON");
    return obj;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

} // namespace

std::string tensor_to_json(const Tensor& t) { return tensor_to_obj(t).dump(); }

Tensor tensor_from_json(const std::string& text, const LoadOptions& opts) {
    return tensor_from_obj(parse_text(text), opts);
}

void save_tensor(const std::string& path, const Tensor& t) {
    write_file(path, tensor_to_json(t) + "\n");
}

Tensor load_tensor(const std::string& path, const LoadOptions& opts) {
    return tensor_from_json(read_file(path), opts);
}

// ---------------------------------------------------------------------------
// Diagrams
// ---------------------------------------------------------------------------

namespace {

json port_to_obj(const PortRef& p) { return json::array({p.node, p.port}); }

PortRef port_from_obj(const json& v) {
    if (!v.is_array() || v.size() != 2)
        throw ParseError("port references must be [node, port] pairs");
    return PortRef{v[0].get<std::size_t>(), v[1].get<std::size_t>()};
}

} // namespace

std::string diagram_to_json(const Diagram& d) {
    json obj;
    obj["scale"] = d.scale();
    json nodes = json::array();
    for (const Node& n : d.nodes()) {
        json rec;
        switch (n.kind) {
            case NodeType::dense:
                rec["kind"] = "dense";
                rec["name"] = n.name;
                rec["tensor"] = tensor_to_obj(n.dense);
                break;
            case NodeType::delta:
                rec["kind"] = "delta";
                rec["rank"] = n.delta_rank;
                rec["dim"] = n.dim;
                break;
            case NodeType::gamma:
                rec["kind"] = "gamma";
                rec["dims"] = n.gamma_dims;
                break;
            case NodeType::chi:
                rec["kind"] = "chi";
                rec["signature"] = n.chi_sig.str();
                rec["dim"] = n.dim;
                break;
            case NodeType::fourier:
                rec["kind"] = "fourier";
                rec["dim"] = n.dim;
                rec["direction"] =
                    n.direction == FourierDirection::forward ? "forward" : "inverse";
                break;
        }
        nodes.push_back(std::move(rec));
    }
    obj["nodes"] = std::move(nodes);

    json wires = json::array();
    for (const auto& [pa, pb] : d.wires())
        wires.push_back(json::array({port_to_obj(pa), port_to_obj(pb)}));
    obj["wires"] = std::move(wires);

    json free = json::array();
    for (const PortRef& p : d.free_ports()) free.push_back(port_to_obj(p));
    obj["free"] = std::move(free);
    return obj.dump();
}

Diagram diagram_from_json(const std::string& text, const LoadOptions& opts) {
    const json obj = parse_text(text);
    if (!obj.is_object() || !obj.contains("nodes"))
        throw ParseError("diagram record needs a \"nodes\" array");

    std::vector<Node> nodes;
    for (const auto& rec : obj.at("nodes")) {
        const std::string kind = rec.at("kind").get<std::string>();
        if (kind == "dense") {
            Tensor t;
            if (rec.contains("tensor")) {
                t = tensor_from_obj(rec.at("tensor"), opts);
            } else if (rec.contains("tensor_ref")) {
                std::filesystem::path p = rec.at("tensor_ref").get<std::string>();
                if (p.is_relative() && !opts.base_dir.empty())
                    p = std::filesystem::path(opts.base_dir) / p;
                t = load_tensor(p.string(), opts);
            } else {
                throw ParseError("dense node needs \"tensor\" or \"tensor_ref\"");
            }
            nodes.push_back(
                Node::make_dense(std::move(t), rec.value("name", std::string("T"))));
        } else if (kind == "delta") {
            nodes.push_back(Node::make_delta(rec.at("rank").get<std::size_t>(),
                                             rec.at("dim").get<std::size_t>()));
        } else if (kind == "gamma") {
            nodes.push_back(Node::make_gamma(rec.at("dims").get<std::vector<std::size_t>>()));
        } else if (kind == "chi") {
            nodes.push_back(Node::make_chi(Signature::parse(rec.at("signature").get<std::string>()),
                                           rec.at("dim").get<std::size_t>()));
        } else if (kind == "fourier") {
            const std::string dir = rec.value("direction", std::string("forward"));
            if (dir != "forward" && dir != "inverse")
                throw ParseError("fourier direction must be \"forward\" or \"inverse\"");
            nodes.push_back(Node::make_fourier(rec.at("dim").get<std::size_t>(),
                                               dir == "forward" ? FourierDirection::forward
                                                                : FourierDirection::inverse));
        } else {
            throw ParseError("unknown node kind \"" + kind + "\"");
        }
    }

    std::vector<Wire> wires;
    if (obj.contains("wires"))
        for (const auto& w : obj.at("wires")) {
            if (!w.is_array() || w.size() != 2)
                throw ParseError("wires must be pairs of port references");
            wires.push_back({port_from_obj(w[0]), port_from_obj(w[1])});
        }

    std::vector<PortRef> free;
    if (obj.contains("free"))
        for (const auto& p : obj.at("free")) free.push_back(port_from_obj(p));

    const double scale = obj.value("scale", 1.0);
    try {
        return build(std::move(nodes), std::move(wires), std::move(free), scale);
    } catch (const DiagramError& e) {
        throw ParseError(std::string("invalid diagram: ") + e.what());
    }
}

void save_diagram(const std::string& path, const Diagram& d) {
    write_file(path, diagram_to_json(d) + "\n");
}

Diagram load_diagram(const std::string& path, const LoadOptions& opts) {
    LoadOptions local = opts;
    if (local.base_dir.empty())
        local.base_dir = std::filesystem::path(path).parent_path().string();
    return diagram_from_json(read_file(path), local);
}

} // namespace tcalc::io
