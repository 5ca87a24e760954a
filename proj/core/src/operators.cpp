#include "phibvp/operators.hpp"

#include "phibvp/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phibvp {
namespace {

void require_kind(const Homeomorphism& phi, HomeoKind kind, const char* op) {
  if (phi.kind() != kind)
    throw std::invalid_argument(fmt::format("{} needs a {} phi, got '{}' ({})", op, to_string(kind),
                                            phi.describe(), to_string(phi.kind())));
}

void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument(fmt::format("lambda must lie in [0, 1], got {}", lambda));
}

// Spreads the closure defect u(T) − target linearly over the grid so that the last node hits target.
void close_at_T(const Grid& grid, Samples& u, double target) {
  const double defect = u.back() - target;
  const double T = grid.length();
  for (std::size_t i = 0; i < u.size(); ++i) u[i] -= (grid.node(i) / T) * defect;
  u.back() = target;
}

}  // namespace

Samples nemytskii(const Expr& f, const GridFunction& gf) {
  const Grid& grid = gf.grid();
  Samples out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    try {
      out[i] = f.eval(grid.node(i), gf.u()[i], gf.du()[i]);
    } catch (const EvalDomain& e) {
      throw EvalDomain(e.what(), static_cast<long>(i));
    }
  }
  return out;
}

double qphi_tolerance(const Grid& grid) { return 1e-12 * grid.length(); }

double qphi_defining_integral(const Homeomorphism& phi, const Grid& grid, std::span<const double> h, double s) {
  Samples v(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) v[i] = phi.apply_inverse(h[i] - s);
  return integral(grid, v);
}

QphiResult q_phi(const Homeomorphism& phi, const Grid& grid, std::span<const double> h) {
  if (phi.kind() == HomeoKind::Bounded) {
    const double sup = sup_norm(h);
    const double half_a = 0.5 * phi.scale();
    if (!(sup < half_a)) throw PreconditionBoundedDomain(sup, half_a);
  }

  const auto [h_min, h_max] = min_max(h);
  auto G = [&](double s) { return qphi_defining_integral(phi, grid, h, s); };

  if (h_min == h_max) return {h.front(), G(h.front()), 0};

  double lo = h_min;
  double hi = h_max;
  double g_lo = G(lo);
  double g_hi = G(hi);
  if (!(g_lo >= 0.0 && g_hi <= 0.0)) throw NoSignChange(g_lo, g_hi);
  if (g_lo == 0.0) return {lo, 0.0, 0};
  if (g_hi == 0.0) return {hi, 0.0, 0};

  // Past the width target keep halving while neither end meets the residual tolerance: with a
  // steep φ⁻¹ (cbrt near 0) G_h can drop by more than the tolerance across a few ulps of s.
  const double width_tol = 1e-13 * std::max(1.0, std::abs(h_max));
  const double residual_tol = qphi_tolerance(grid);
  int iterations = 0;
  while (hi - lo > width_tol || std::min(g_lo, -g_hi) > residual_tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double g = G(mid);
    ++iterations;
    if (g == 0.0) return {mid, 0.0, iterations};
    if (g > 0.0) {
      lo = mid;
      g_lo = g;
    } else {
      hi = mid;
      g_hi = g;
    }
  }

  // One regula-falsi step inside the final bracket; keep whichever candidate is best.
  QphiResult best{lo, g_lo, iterations};
  if (std::abs(g_hi) < std::abs(best.residual)) best = {hi, g_hi, iterations};
  const double interp = std::clamp(lo + g_lo * (hi - lo) / (g_lo - g_hi), lo, hi);
  if (interp > lo && interp < hi) {
    const double g = G(interp);
    if (std::abs(g) < std::abs(best.residual)) best = {interp, g, iterations};
  }
  return best;
}

GridFunction dirichlet_M(const Homeomorphism& phi, const Expr& f, const GridFunction& gf, double lambda) {
  require_kind(phi, HomeoKind::Bounded, "dirichlet_M");
  require_lambda(lambda);
  const Grid& grid = gf.grid();

  Samples h = cumulative_integral_from_0(grid, nemytskii(f, gf));
  for (double& x : h) x *= lambda;

  const double a = phi.scale();
  const double norm = sup_norm(h);
  if (!(norm < 0.5 * a)) throw OmegaViolation(norm, 0.5 * a, lambda);

  const QphiResult shift = q_phi(phi, grid, h);
  Samples du(grid.size());
  for (std::size_t i = 0; i < du.size(); ++i) {
    const double arg = h[i] - shift.s;
    if (!(std::abs(arg) <= a - kDomainGuard)) throw OmegaViolation(norm, 0.5 * a, lambda);
    du[i] = phi.apply_inverse(arg);
  }

  Samples u = cumulative_integral_from_0(grid, du);
  close_at_T(grid, u, 0.0);
  return GridFunction(grid, std::move(u), std::move(du));
}

GridFunction threepoint_singular_M(const Homeomorphism& phi, const Expr& f, const GridFunction& gf) {
  require_kind(phi, HomeoKind::Singular, "threepoint_singular_M");
  const Grid& grid = gf.grid();

  const Samples k = cumulative_integral_to_T(grid, nemytskii(f, gf));
  const QphiResult shift = q_phi(phi, grid, k);

  Samples du(grid.size());
  for (std::size_t i = 0; i < du.size(); ++i) du[i] = phi.apply_inverse(k[i] - shift.s);
  const double start = phi.apply_inverse(-shift.s);

  Samples u = cumulative_integral_from_0(grid, du);
  for (double& x : u) x += start;
  close_at_T(grid, u, start);
  return GridFunction(grid, std::move(u), std::move(du));
}

GridFunction threepoint_classic_M1(const Homeomorphism& phi, const Expr& f, const GridFunction& gf,
                                   double lambda) {
  require_kind(phi, HomeoKind::Classic, "threepoint_classic_M1");
  require_lambda(lambda);
  const Grid& grid = gf.grid();

  Samples n = nemytskii(f, gf);
  const double q = mean(grid, n);
  for (double& x : n) x -= q;
  const Samples centered_integral = cumulative_integral_from_0(grid, n);

  const double end_value = endpoint_T(gf.u());
  const double phi_end = phi.apply(end_value);
  Samples du(grid.size());
  for (std::size_t i = 0; i < du.size(); ++i) du[i] = phi.apply_inverse(lambda * centered_integral[i] + phi_end);

  Samples u = cumulative_integral_to_T(grid, du);
  for (double& x : u) x += end_value + q;
  return GridFunction(grid, std::move(u), std::move(du));
}

}  // namespace phibvp
