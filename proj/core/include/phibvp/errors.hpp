#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phibvp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument of φ or φ⁻¹ fell outside the open interval (lo, hi) shrunk by the guard margin.
class DomainViolation : public Error {
 public:
  DomainViolation(double value, double lo, double hi);

  double value() const noexcept { return value_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double value_;
  double lo_;
  double hi_;
};

/// Expression evaluation left the domain of an elementary function (log, sqrt, division, overflow).
class EvalDomain : public Error {
 public:
  explicit EvalDomain(const std::string& what, long node = -1);

  /// Grid node at which the fault happened, or -1 when not evaluated on a grid.
  long node() const noexcept { return node_; }

 private:
  long node_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position);

  /// Zero-based character offset into the source text.
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class SyntaxError : public ParseError {
 public:
  SyntaxError(std::size_t position, std::string expected);

  const std::string& expected() const noexcept { return expected_; }

 private:
  std::string expected_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(std::size_t position, std::string name);

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Q_φ for a bounded φ requires ‖h‖∞ < a/2.
class PreconditionBoundedDomain : public Error {
 public:
  PreconditionBoundedDomain(double sup_norm, double half_a);

  double sup_norm() const noexcept { return sup_norm_; }
  double half_a() const noexcept { return half_a_; }

 private:
  double sup_norm_;
  double half_a_;
};

class NoSignChange : public Error {
 public:
  NoSignChange(double g_lo, double g_hi);
};

/// ‖λH(N_f u)‖∞ reached a/2, or an argument of φ⁻¹ got within ε_dom of ±a.
class OmegaViolation : public Error {
 public:
  OmegaViolation(double norm, double half_a, double lambda);

  double norm() const noexcept { return norm_; }
  double half_a() const noexcept { return half_a_; }
  double lambda() const noexcept { return lambda_; }

 private:
  double norm_;
  double half_a_;
  double lambda_;
};

class OracleFailure : public Error {
 public:
  using Error::Error;
};

/// G vanishes (numerically) on the circle, so the degree is undefined.
class BoundaryZero : public Error {
 public:
  BoundaryZero(double min_norm, double threshold);

  double min_norm() const noexcept { return min_norm_; }

 private:
  double min_norm_;
};

/// n' supplied by the user disagrees with a central difference of n.
class InconsistentDerivative : public Error {
 public:
  InconsistentDerivative(double x, double supplied, double estimated);
};

}  // namespace phibvp
