#pragma once

#include <stdexcept>
#include <string>

namespace dagmf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural problems with a label graph (unknown ids, failed validation).
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Invalid super-object group specification.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent problem, lattice or solver parameters.
class ProblemError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable files.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dagmf
