#pragma once

#include <stdexcept>
#include <string>

namespace hgcl {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dataset loading / validation failure. Messages name the file and line
/// that triggered the problem whenever one is known.
struct DatasetError : Error {
  using Error::Error;
};

/// Structural problem with a graph, meta-path or schema.
struct GraphError : Error {
  using Error::Error;
};

/// Shape mismatch between tensors.
struct ShapeError : Error {
  using Error::Error;
};

/// Problem during tape recording or backpropagation (non-finite values,
/// non-scalar backward seed, empty softmax segment, ...).
struct TapeError : Error {
  using Error::Error;
};

/// Invalid or inconsistent configuration value.
struct ConfigError : Error {
  using Error::Error;
};

/// Filesystem / serialization failure.
struct IoError : Error {
  using Error::Error;
};

}  // namespace hgcl
