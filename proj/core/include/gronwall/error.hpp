#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace gronwall {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset` is the byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Identifier outside the allowed variable set (parse time).
class UnknownVariableError : public ParseError {
public:
    UnknownVariableError(const std::string& name, std::size_t offset)
        : ParseError("unknown variable '" + name + "'", offset), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Call to a function the language does not define.
class UnknownFunctionError : public ParseError {
public:
    UnknownFunctionError(const std::string& name, std::size_t offset)
        : ParseError("unknown function '" + name + "'", offset), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Evaluation with a free variable that has no binding.
class EvalError : public Error {
public:
    using Error::Error;
};

/// A numerical value that must be finite was not, at grid node `node`.
class DomainError : public Error {
public:
    DomainError(const std::string& message, std::size_t node)
        : Error(message + " (node " + std::to_string(node) + ")"), node_(node) {}

    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// Input data violates a hypothesis (sign, monotonicity, exponent range).
class HypothesisError : public Error {
public:
    explicit HypothesisError(const std::string& message) : Error(message) {}
    HypothesisError(const std::string& message, std::size_t node)
        : Error(message + " (first offending node " + std::to_string(node) + ")"), node_(node) {}

    std::optional<std::size_t> node() const noexcept { return node_; }

private:
    std::optional<std::size_t> node_;
};

}  // namespace gronwall
