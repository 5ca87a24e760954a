#pragma once

// Line-oriented `key = value` problem files.
//
//   # the mean-curvature example
//   problem = dirichlet
//   phi     = mean_curvature 1
//   T       = 0.1
//   f       = "u - 2"

#include "phibvp/errors.hpp"
#include "phibvp/expr.hpp"
#include "phibvp/homeomorphism.hpp"
#include "phibvp/solver.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace phibvp::cli {

/// A malformed or incomplete problem file. line and column are 1-based; 0 means "not tied to a line".
class ProblemFileError : public Error {
 public:
  ProblemFileError(const std::string& source, std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

struct ProblemFile {
  std::string source;  ///< file name used in messages
  std::optional<BoundaryClass> problem;
  std::optional<Homeomorphism> phi;
  std::optional<double> T;
  std::optional<Expr> f;
  std::optional<std::size_t> grid_n;
  std::optional<Expr> h;
  std::optional<Expr> n;
  std::optional<Expr> dn;
  std::optional<Expr> c;
  std::optional<double> m1;
  std::optional<double> m2;
  std::optional<double> rho;
  std::optional<double> lambda_step;
  std::optional<double> tol;
  std::optional<IterationScheme> iteration;
  std::map<std::string, std::size_t, std::less<>> lines;  ///< key → line it was set on

  /// Every value is parsed under its type here; unknown and repeated keys are rejected.
  static ProblemFile parse(std::string_view text, std::string source = "<input>");
  static ProblemFile load(const std::filesystem::path& path);

  /// Throws ProblemFileError naming the key and the command that needs it.
  template <class V>
  const V& need(const std::optional<V>& field, std::string_view key, std::string_view command) const {
    if (!field) missing(key, command);
    return *field;
  }

  /// Solver input: problem, phi, T and f are required.
  ProblemSpec to_spec(std::string_view command) const;

 private:
  [[noreturn]] void missing(std::string_view key, std::string_view command) const;
};

}  // namespace phibvp::cli
