#pragma once

#include <stdexcept>
#include <string>

namespace dtwtc {

// Base for everything the library throws.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Precondition / argument violations (shape mismatch, out-of-range parameter, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// A token that could not be parsed; message carries file:line:column context.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

// Structurally malformed input (ragged rows, bad header, truncated file).
class FormatError : public Error {
public:
    explicit FormatError(const std::string& what) : Error(what) {}
};

// Inputs that are individually valid but disagree with each other
// (e.g. signal files with different row counts).
class ConsistencyError : public Error {
public:
    explicit ConsistencyError(const std::string& what) : Error(what) {}
};

} // namespace dtwtc
