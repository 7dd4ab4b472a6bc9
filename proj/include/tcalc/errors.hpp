#pragma once

#include <stdexcept>
#include <string>

namespace tcalc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Shape, rank or extent violations (extent-mismatch, rank-mismatch, non-square, ...).
struct ShapeError : Error {
    using Error::Error;
};

/// Text or JSON input that does not parse; carries a position where known.
struct ParseError : Error {
    explicit ParseError(const std::string& msg, std::size_t pos = npos)
        : Error(pos == npos ? msg : msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t position;
};

/// Dense materialization would exceed the configured entry cap.
struct CapError : Error {
    using Error::Error;
};

/// Evaluation would exceed the configured multiply-add budget.
struct BudgetError : Error {
    using Error::Error;
};

/// Structurally invalid diagram (dangling port, port reuse, wire extent mismatch, ...).
struct DiagramError : Error {
    using Error::Error;
};

} // namespace tcalc
