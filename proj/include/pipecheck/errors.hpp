#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pipecheck {

// Base of every error raised by the library. Data-level failures of a
// component are not exceptions; see ExecutionError in components.hpp.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based, 0 when not applicable.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Well-formed input that violates a dataset invariant.
class SchemaError : public Error {
public:
    using Error::Error;
};

// JSON that does not match one of the library's schemas. The message
// carries a JSON-pointer-like path to the offending node.
class DeserializeError : public Error {
public:
    DeserializeError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class NotFound : public Error {
public:
    using Error::Error;
};

class UnknownComponent : public Error {
public:
    explicit UnknownComponent(const std::string& id)
        : Error("unknown component '" + id + "'"), id_(id) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class LengthExceeded : public Error {
public:
    LengthExceeded(std::size_t length, std::size_t max)
        : Error("pipeline has " + std::to_string(length) + " steps, maximum is " + std::to_string(max)) {}
};

class MissingKnowledge : public Error {
public:
    explicit MissingKnowledge(const std::string& id)
        : Error("knowledge base has no entry for '" + id + "'"), id_(id) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

// A component failed on every probe dataset during knowledge-base induction.
class ProbeError : public Error {
public:
    using Error::Error;
};

}  // namespace pipecheck
