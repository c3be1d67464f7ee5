#pragma once

#include <stdexcept>

namespace rankload {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input data (stream files, matrix CSVs, manifests).
class ParseError : public Error {
public:
  using Error::Error;
};

// Invalid parameter or configuration value.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

// The stream is too short (or misaligned) for the requested evaluation.
class InsufficientData : public Error {
public:
  using Error::Error;
};

}  // namespace rankload
