#pragma once

// Composite operators on grid functions. Notation follows the usual one for
// φ-Laplacian fixed-point formulations: H and K are the integration operators of
// function_space, Q is the mean, S(u) = u(T), N_f the Nemytskii operator and Q_φ the
// nonlinear mean-zero shift.

#include "phibvp/expr.hpp"
#include "phibvp/function_space.hpp"
#include "phibvp/homeomorphism.hpp"

#include <span>

namespace phibvp {

/// f(t_i, u_i, u'_i) at every node. EvalDomain carries the offending node index.
Samples nemytskii(const Expr& f, const GridFunction& gf);

struct QphiResult {
  double s = 0.0;         ///< Q_φ(h)
  double residual = 0.0;  ///< G_h(s) = ∫₀ᵀ φ⁻¹(h − s)
  int iterations = 0;
};

/// Absolute tolerance on G_h(s) after the shift solve: 1e-12·T.
double qphi_tolerance(const Grid& grid);

/// G_h(s) = ∫₀ᵀ φ⁻¹(h(t) − s) dt by the trapezoid rule of function_space.
double qphi_defining_integral(const Homeomorphism& phi, const Grid& grid, std::span<const double> h, double s);

/// The unique s ∈ [h_m, h_M] with G_h(s) = 0, found by bisection (G_h is strictly decreasing).
///
/// A constant h returns s = h(0) exactly. For a bounded φ this throws
/// PreconditionBoundedDomain unless ‖h‖∞ < a/2.
QphiResult q_phi(const Homeomorphism& phi, const Grid& grid, std::span<const double> h);

/// M(λ, u) = H(φ⁻¹[λH(N_f u) − Q_φ(λH(N_f u))]) for a bounded φ.
///
/// The result vanishes at both endpoints exactly. Throws OmegaViolation when
/// ‖λH(N_f u)‖∞ ≥ a/2 or an argument of φ⁻¹ comes within kDomainGuard of ±a.
GridFunction dirichlet_M(const Homeomorphism& phi, const Expr& f, const GridFunction& gf, double lambda);

/// M(u) = φ⁻¹(−Q_φ(K N_f u)) + H(φ⁻¹[K N_f u − Q_φ(K N_f u)]) for a singular φ.
///
/// The result satisfies w(0) = w(T) and w'(T) = w(0).
GridFunction threepoint_singular_M(const Homeomorphism& phi, const Expr& f, const GridFunction& gf);

/// M(λ, u) = S(u) + Q(N_f u) + K(φ⁻¹[λH(N_f u − Q(N_f u)) + φ(S(u))]) for a classic φ.
/// λ = 1 is the operator M₁ whose fixed points solve u(T) = u'(0) = u'(T).
GridFunction threepoint_classic_M1(const Homeomorphism& phi, const Expr& f, const GridFunction& gf,
                                   double lambda = 1.0);

}  // namespace phibvp
