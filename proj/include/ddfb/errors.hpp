#pragma once

#include <stdexcept>
#include <string>

namespace ddfb {

// Malformed or schema-violating input. Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Syntax error in a document; the message carries line/column.
class ParseError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// File system failures. Maps to CLI exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A postcondition the library promises did not hold. Maps to exit code 3.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace ddfb
