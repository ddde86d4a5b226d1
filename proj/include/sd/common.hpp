#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sd {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Error taxonomy. Every throwing path in the library uses one of these so
// callers (and the CLI) can map failures to stable exit codes.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input violates a documented precondition (bad signature, bad index, ...).
struct DomainError : Error {
  using Error::Error;
};

// Structural data is self-inconsistent (broken involution, bad genus, ...).
struct MalformedError : Error {
  using Error::Error;
};

// An internal consistency check failed; indicates a bug, never bad input.
struct InternalError : Error {
  using Error::Error;
};

// "num/den" (den omitted when 1).  Used by every JSON schema that carries
// exact coordinates.
std::string rational_to_string(const Rational& q);
Rational rational_from_string(const std::string& s);

}  // namespace sd
