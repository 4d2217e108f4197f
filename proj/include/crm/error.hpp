#pragma once

#include <stdexcept>
#include <string>

namespace crm {

// Base for all failures raised by the library. Precondition violations on
// plain values use the standard std::invalid_argument / std::domain_error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file does not follow its declared format (PGM, CRMVID, CRMTRIALS, ...).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Encoded stream is truncated, corrupt, or was produced with another model.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Filesystem failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace crm
