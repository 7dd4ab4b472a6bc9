#include "tcalc/einsum_program.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

namespace tcalc {

namespace {

const char* kBuiltinNames[] = {"delta[", "gamma[", "chi[", "fourier["};

std::vector<std::string> split_args(const std::string& inner) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : inner) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::size_t parse_extent(const std::string& s, const std::string& what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(what + " expects a positive integer, got \"" + s + "\"");
    const unsigned long long v = std::stoull(s);
    if (v == 0) throw ParseError(what + " must be >= 1");
    return static_cast<std::size_t>(v);
}

} // namespace

bool Builtin::looks_like(const std::string& text) {
    for (const char* prefix : kBuiltinNames)
        if (text.rfind(prefix, 0) == 0) return true;
    return false;
}

Builtin Builtin::parse(const std::string& text) {
    if (text.empty() || text.back() != ']')
        throw ParseError("builtin must look like name[args], got \"" + text + "\"");
    const std::size_t open = text.find('[');
    if (open == std::string::npos) throw ParseError("builtin must look like name[args]");
    const std::string name = text.substr(0, open);
    const auto args = split_args(text.substr(open + 1, text.size() - open - 2));

    Builtin b;
    if (name == "delta") {
        if (args.size() != 2) throw ParseError("delta[N,D] expects two arguments");
        b.kind = Kind::delta;
        b.rank = parse_extent(args[0], "delta rank");
        b.dim = parse_extent(args[1], "delta dim");
    } else if (name == "gamma") {
        if (args.empty()) throw ParseError("gamma[I1,...,In] expects at least one extent");
        b.kind = Kind::gamma;
        for (const auto& a : args) b.dims.push_back(parse_extent(a, "gamma extent"));
    } else if (name == "chi") {
        if (args.size() != 2) throw ParseError("chi[sig,D] expects two arguments");
        b.kind = Kind::chi;
        b.sig = Signature::parse(args[0]);
        b.dim = parse_extent(args[1], "chi dim");
    } else if (name == "fourier") {
        if (args.empty() || args.size() > 2)
            throw ParseError("fourier[D,fwd|inv] expects one or two arguments");
        b.kind = Kind::fourier;
        b.dim = parse_extent(args[0], "fourier dim");
        if (args.size() == 2) {
            if (args[1] == "fwd" || args[1] == "forward")
                b.direction = FourierDirection::forward;
            else if (args[1] == "inv" || args[1] == "inverse")
                b.direction = FourierDirection::inverse;
            else
                throw ParseError("fourier direction must be fwd or inv, got \"" + args[1] +
                                 "\"");
        }
    } else {
        throw ParseError("unknown builtin \"" + name + "\"");
    }
    return b;
}

std::string Builtin::to_string() const {
    switch (kind) {
        case Kind::delta:
            return "delta[" + std::to_string(rank) + "," + std::to_string(dim) + "]";
        case Kind::gamma: {
            std::string s = "gamma[";
            for (std::size_t i = 0; i < dims.size(); ++i)
                s += (i ? "," : "") + std::to_string(dims[i]);
            return s + "]";
        }
        case Kind::chi: return "chi[" + sig.str() + "," + std::to_string(dim) + "]";
        case Kind::fourier:
            return "fourier[" + std::to_string(dim) + "," +
                   (direction == FourierDirection::forward ? "fwd" : "inv") + "]";
    }
    return {};
}

Tensor Builtin::materialize(std::size_t cap) const {
    switch (kind) {
        case Kind::delta: return delta_dense(rank, dim, cap);
        case Kind::gamma: return gamma_dense(dims, cap);
        case Kind::chi: return chi_dense(sig, dim, cap);
        case Kind::fourier: return fourier_matrix(dim, direction);
    }
    throw Error("unknown builtin kind");
}

OperandBinding OperandBinding::classify(const std::string& value) {
    OperandBinding b;
    if (Builtin::looks_like(value)) {
        b.source = Source::builtin;
        b.builtin = Builtin::parse(value);
        b.text = value;
    } else if (!value.empty() && value.front() == '{') {
        b.source = Source::inline_json;
        b.text = value;
    } else {
        b.source = Source::file;
        b.text = value;
    }
    return b;
}

EinsumProgram EinsumProgram::parse(const std::string& text) {
    EinsumProgram p;
    p.spec = IndexSpec::parse(text);
    return p;
}

EinsumProgram EinsumProgram::parse_integer_lists(const std::string& json_text) {
    const nlohmann::json obj = nlohmann::json::parse(json_text, nullptr, false);
    if (obj.is_discarded()) throw ParseError("malformed program JSON");
    if (!obj.is_object() || !obj.contains("operands") || !obj.at("operands").is_array())
        throw ParseError("program JSON needs an \"operands\" array of integer lists");

    auto to_labels = [](const nlohmann::json& arr) {
        std::vector<int> labels;
        for (const auto& v : arr) {
            if (!v.is_number_integer())
                throw ParseError("operand index lists must contain integers");
            const long long id = v.get<long long>();
            if (id < 0 || id >= 52)
                throw ParseError("index ids must lie in 0..51, got " + std::to_string(id));
            labels.push_back(static_cast<int>(id));
        }
        return labels;
    };

    EinsumProgram p;
    for (const auto& arr : obj.at("operands")) {
        if (!arr.is_array()) throw ParseError("each operand entry must be an integer list");
        p.spec.operands.push_back(to_labels(arr));
    }
    if (p.spec.operands.empty()) throw ParseError("program needs at least one operand");

    if (obj.contains("output")) {
        p.spec.output = to_labels(obj.at("output"));
    } else {
        std::map<int, int> count;
        for (const auto& op : p.spec.operands)
            for (int l : op) ++count[l];
        for (const auto& [l, n] : count)
            if (n == 1) p.spec.output.push_back(l);
    }
    return p;
}

} // namespace tcalc
