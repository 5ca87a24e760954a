#pragma once

#include "phibvp/errors.hpp"
#include "phibvp/expr.hpp"
#include "phibvp/function_space.hpp"
#include "phibvp/homeomorphism.hpp"

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace phibvp {

/// dirichlet: u(0) = 0 = u(T), bounded φ.
/// threepoint_singular: u(T) = u(0) = u'(T), singular φ.
/// threepoint_classic: u(T) = u'(0) = u'(T), classic φ.
enum class BoundaryClass { DirichletBounded, ThreePointSingular, ThreePointClassic };

std::string_view to_string(BoundaryClass bc);

/// Accepts `dirichlet`, `threepoint_singular`, `threepoint_classic`.
BoundaryClass parse_boundary_class(std::string_view name);

/// The φ kind each boundary class is formulated for.
HomeoKind required_kind(BoundaryClass bc);

enum class IterationScheme {
  /// u ← u + θ(M(u) − u).
  Picard,
  /// 2×2 Newton on the affine functions a + bt, damped Picard on the complement.
  NewtonPicard,
};

std::string_view to_string(IterationScheme scheme);
IterationScheme parse_iteration_scheme(std::string_view name);

struct SolverOptions {
  double tol_fp = 1e-10;  ///< relative: converged when ‖u − M(u)‖₁ ≤ tol_fp·(1 + ‖u‖₁)
  double tol_bc = 1e-8;
  int max_iter = 10000;  ///< per λ stage
  double lambda_step = 0.1;
  double min_lambda_step = 1e-3;
  double theta0 = 1.0;
  double theta_min = 1e-3;
  double theta_growth = 1.2;
  /// Unset: NewtonPicard for ThreePointClassic, Picard otherwise.
  std::optional<IterationScheme> scheme;
};

struct ProblemSpec {
  BoundaryClass bc;
  Homeomorphism phi;
  Expr f;
  double T;
  std::size_t grid_n = kDefaultGridNodes;
  SolverOptions options{};

  /// Throws std::invalid_argument when φ does not match the boundary class or a number is out of range.
  void validate() const;
  Grid grid() const { return Grid(T, grid_n); }
  IterationScheme scheme() const;
};

struct LambdaStage {
  double lambda;
  int iterations;
};

struct SolveReport {
  GridFunction solution;
  double fp_residual = 0.0;   ///< ‖u − M(1, u)‖₁
  double ode_residual = 0.0;  ///< interior sup of |Δ[φ(u')]/Δt − f(t, u, u')|, centered differences
  double bc_residual = 0.0;
  double consistency_defect = 0.0;
  std::vector<LambdaStage> lambda_path;
  bool converged = false;
  std::optional<double> omega_margin;  ///< a/2 − ‖H(N_f u)‖∞, dirichlet only
  IterationScheme scheme = IterationScheme::Picard;
};

/// Raised after max_iter iterations of one λ stage. Carries the report of the best iterate.
class NonConvergence : public Error {
 public:
  NonConvergence(double best_residual, int iterations, double lambda, std::shared_ptr<const SolveReport> report);

  double best_residual() const noexcept { return best_residual_; }
  int iterations() const noexcept { return iterations_; }
  double lambda() const noexcept { return lambda_; }
  const SolveReport& report() const noexcept { return *report_; }

 private:
  double best_residual_;
  int iterations_;
  double lambda_;
  std::shared_ptr<const SolveReport> report_;
};

/// The fixed-point map of the boundary class at homotopy parameter λ (ignored for threepoint_singular).
GridFunction apply_operator(const ProblemSpec& spec, const GridFunction& gf, double lambda);

/// Damped fixed-point iteration from u ≡ 0 with λ-continuation 0 → 1 (none for threepoint_singular).
///
/// Throws NonConvergence, OmegaViolation (dirichlet, after the λ step fell below min_lambda_step)
/// or EvalDomain when f cannot be evaluated at the starting iterate.
SolveReport solve(const ProblemSpec& spec);

/// Independent check: RK4 on u' = φ⁻¹(w), w' = f(t, u, φ⁻¹(w)) over the same grid, with the
/// unknown initial data found by shooting. Throws OracleFailure.
GridFunction shooting_oracle(const ProblemSpec& spec);

/// Interior residual of (φ(u'))' = f(t, u, u'); +∞ when φ(u') cannot be evaluated.
double ode_residual(const ProblemSpec& spec, const GridFunction& gf);

/// Residual at every node; one-sided second-order differences at the two endpoints.
Samples ode_residual_profile(const ProblemSpec& spec, const GridFunction& gf);

double bc_residual(BoundaryClass bc, const GridFunction& gf);

}  // namespace phibvp
