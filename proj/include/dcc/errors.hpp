#pragma once

#include <stdexcept>
#include <string>

namespace dcc {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Caller passed an argument outside an operation's domain.
class argument_error : public error {
  public:
    using error::error;
};

/// Input file is syntactically malformed.
class parse_error : public error {
  public:
    using error::error;
};

/// Input parsed but violates a data invariant (e.g. non-binary label).
class validation_error : public error {
  public:
    using error::error;
};

class training_error : public error {
  public:
    using error::error;
};

/// Chain inference touched a label that has not been decided yet.
class contract_error : public error {
  public:
    using error::error;
};

class insufficient_data_error : public error {
  public:
    using error::error;
};

class unsupported_error : public error {
  public:
    using error::error;
};

}  // namespace dcc
