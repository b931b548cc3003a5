#pragma once
#include <stdexcept>
#include <string>

namespace qgpt {

// Base for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files (OBJ records, token streams).
struct ParseError : Error {
    ParseError(const std::string& what, long line = -1)
        : Error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_number(line) {}
    long line_number;
};

// Violated operation precondition (degenerate geometry, bad arity, size limits).
struct InvalidInput : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace qgpt
