#pragma once

#include <stdexcept>
#include <string>

namespace xyqaoa {

/// Dimension or index outside the domain of an operation (N < 2, k out of range, size mismatch).
class InvalidDimension : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds a hard resource cap (dense 2^N simulation, 2^(p-1) compositions).
class ResourceLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Constraint parameters that admit no feasible point (t_f <= 0, negative duration).
class InvalidConstraint : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A coefficient the result divides by is zero or non-finite.
class SingularCoefficient : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed textual input (range strings, schedules, CSV rows, JSON specs).
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Degenerate least-squares design (too few points, rank deficiency).
class FitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace xyqaoa
