#pragma once

#include <stdexcept>
#include <string>

namespace wordspot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Image or region has an unusable size.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input: image files, manifests, index files.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Persisted index was built with a different extraction configuration.
class ConfigMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace wordspot
