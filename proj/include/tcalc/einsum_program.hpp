#pragma once

#include <map>
#include <string>
#include <vector>

#include "tcalc/einsum.hpp"
#include "tcalc/mediators.hpp"

namespace tcalc {

/// Mediator builtin usable as an einsum operand: delta[N,D],
/// gamma[I1,...,In], chi[sig,D], fourier[D,fwd|inv].
struct Builtin {
    enum class Kind { delta, gamma, chi, fourier };
    Kind kind = Kind::delta;
    std::size_t rank = 0;
    std::size_t dim = 0;
    std::vector<std::size_t> dims;
    Signature sig{1, 1, 1};
    FourierDirection direction = FourierDirection::forward;

    static bool looks_like(const std::string& text);
    static Builtin parse(const std::string& text);
    std::string to_string() const;
    Tensor materialize(std::size_t cap) const;
};

/// How one operand slot gets its tensor.
struct OperandBinding {
    enum class Source { file, inline_json, builtin };
    Source source = Source::file;
    std::string text; // path or inline JSON
    Builtin builtin;

    /// Classify a --bind value: builtin spec, inline JSON ('{'...), or path.
    static OperandBinding classify(const std::string& value);
};

/// A parsed einsum invocation: the index spec plus per-slot bindings
/// (0-based operand position).
struct EinsumProgram {
    IndexSpec spec;
    std::map<std::size_t, OperandBinding> bindings;

    /// String form: "ij,jk->ik" (implicit output without "->").
    static EinsumProgram parse(const std::string& text);

    /// Integer-list form as a JSON document:
    ///   {"operands": [[0,1],[1,2]], "output": [0,2]}
    /// "output" may be omitted for the implicit rule. Ids must be < 52 so
    /// the program stays printable.
    static EinsumProgram parse_integer_lists(const std::string& json_text);

    /// Canonical text form; parse(print()) is the identity.
    std::string print() const { return spec.to_string(); }
};

} // namespace tcalc
