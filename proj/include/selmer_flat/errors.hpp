#pragma once

#include <stdexcept>
#include <string>

namespace selmer_flat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A finite group or search space exceeds the configured enumeration cap.
class TooLarge : public Error {
 public:
  using Error::Error;
};

/// Input violates a structural invariant (not Frobenius-stable, not a chain, ...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// The requested quantity is not defined for this input (e.g. bad reduction
/// where good reduction is a precondition).
class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// Prime divides the index [O_K : Z[theta]]; refusing rather than guessing.
class UnsupportedPrime : public Error {
 public:
  using Error::Error;
};

class MissingInvariant : public Error {
 public:
  using Error::Error;
};

class FactoringCapExceeded : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

/// An identity that must hold mathematically was observed to fail.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace selmer_flat
