#pragma once

#include <stdexcept>
#include <string>

namespace savage {

/// Tolerance for every equality between measures (LP feasibility in doubles).
inline constexpr double kMeasTol = 1e-9;
/// Tolerance for arithmetic reproductions and utility equalities.
inline constexpr double kExactTol = 1e-12;

/// Base class of all named domain failures raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised at construction when a value would break a type invariant.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class ZeroFunction : public Error {
 public:
  ZeroFunction() : Error("discount function is identically zero") {}
};

class NullPool : public Error {
 public:
  NullPool() : Error("geometric pool integrates to zero (disjoint supports)") {}
};

class DegenerateNashPoint : public Error {
 public:
  using Error::Error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

}  // namespace savage
