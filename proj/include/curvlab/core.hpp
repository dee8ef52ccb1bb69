#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace curvlab {

using Vertex = std::int32_t;
using Rational = mpq_class;
using BigInt = mpz_class;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: bad parameters, unparsable files, violated preconditions.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DisconnectedGraph : public InvalidInput {
 public:
  DisconnectedGraph(const std::string& what, Vertex unreachable)
      : InvalidInput(what), unreachable_(unreachable) {}
  Vertex unreachable() const noexcept { return unreachable_; }

 private:
  Vertex unreachable_;
};

class MemoryCapExceeded : public Error {
 public:
  MemoryCapExceeded(const std::string& what, std::size_t required)
      : Error(what), required_(required) {}
  std::size_t required_bytes() const noexcept { return required_; }

 private:
  std::size_t required_;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

enum class Arithmetic { Exact, Float };

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double v) { return v; }

std::string to_string(const Rational& q);

}  // namespace curvlab
