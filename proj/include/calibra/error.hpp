#pragma once

#include <stdexcept>
#include <string>

namespace calibra {

enum class ErrorKind {
    malformed_input,    // unparseable or structurally invalid data
    dimension_mismatch, // dimensions, grades or levels do not line up
    invalid_argument,   // well-formed but outside an operation's domain
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace calibra
