#pragma once

#include <stdexcept>
#include <string>

namespace fairmiss {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text (CSV rows, config lines, serialized trees).
class ParseError : public Error {
public:
    using Error::Error;
};

// Input that parses but violates the declared column roles or label domain.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Out-of-domain hyperparameters or specifications.
class ParameterError : public Error {
public:
    using Error::Error;
};

// Data that cannot support the requested operation (empty cells, missing groups).
class DataError : public Error {
public:
    using Error::Error;
};

// Use of an object before it was fitted.
class StateError : public Error {
public:
    using Error::Error;
};

}  // namespace fairmiss
