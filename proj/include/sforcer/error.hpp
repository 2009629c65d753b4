#ifndef SFORCER_ERROR_HPP
#define SFORCER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace sforcer {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text or a cross-reference that does not resolve.
// Carries a byte offset into the offending text when one is known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}
    explicit ParseError(const std::string& msg) : Error(msg), position_(0) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// A value that violates a structural precondition (arity mismatch,
// unknown symbol, map not total, non-functorial diagram, ...).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// An exhaustive search whose configured size guard was exceeded.
class BoundExceeded : public Error {
public:
    explicit BoundExceeded(const std::string& msg) : Error(msg) {}
};

} // namespace sforcer

#endif
