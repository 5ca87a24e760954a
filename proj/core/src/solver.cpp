#include "phibvp/solver.hpp"

#include "phibvp/operators.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <variant>

namespace phibvp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Correction {
  Samples du_u;
  Samples du_du;
};

struct StageOutcome {
  GridFunction u;
  int iterations;
  double residual;
};

struct StageFailure {
  GridFunction best;
  int iterations;
  double best_residual;
  std::string reason;
};

// Coordinates (a, b) of the affine part a + bt: a = u(0), b = mean(u').
std::array<double, 2> affine_coords(const GridFunction& g) {
  return {g.u().front(), mean(g.grid(), g.du())};
}

GridFunction with_affine(const GridFunction& g, const std::array<double, 2>& from, const std::array<double, 2>& to) {
  const Grid& grid = g.grid();
  Samples u = g.u();
  Samples du = g.du();
  const double da = to[0] - from[0];
  const double db = to[1] - from[1];
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] += da + db * grid.node(i);
    du[i] += db;
  }
  return GridFunction(grid, std::move(u), std::move(du));
}

Correction picard_correction(const GridFunction& u, const GridFunction& m) {
  Correction c{Samples(u.size()), Samples(u.size())};
  for (std::size_t i = 0; i < u.size(); ++i) {
    c.du_u[i] = m.u()[i] - u.u()[i];
    c.du_du[i] = m.du()[i] - u.du()[i];
  }
  return c;
}

// Newton on the affine coordinates p of F(p) = p − coords(M(affine(p) + r)), r the non-affine
// remainder of u; the remainder itself takes the Picard update r ← M(u) − affine(coords(M(u))).
template <class Map>
Correction newton_picard_correction(const GridFunction& u, const GridFunction& m, const Map& M) {
  const std::array<double, 2> p = affine_coords(u);
  const std::array<double, 2> pm = affine_coords(m);
  const std::array<double, 2> F0{p[0] - pm[0], p[1] - pm[1]};

  std::array<double, 2> target = pm;
  bool have_jacobian = true;
  double J[2][2];
  for (int j = 0; j < 2 && have_jacobian; ++j) {
    std::array<double, 2> pj = p;
    const double delta = 1e-7 * std::max(1.0, std::abs(p[j]));
    pj[j] += delta;
    try {
      const std::array<double, 2> qj = affine_coords(M(with_affine(u, p, pj)));
      for (int i = 0; i < 2; ++i) J[i][j] = ((pj[i] - qj[i]) - F0[i]) / delta;
    } catch (const Error&) {
      have_jacobian = false;
    } catch (const std::invalid_argument&) {
      have_jacobian = false;
    }
  }
  if (have_jacobian) {
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const double scale = std::abs(J[0][0] * J[1][1]) + std::abs(J[0][1] * J[1][0]);
    if (std::isfinite(det) && std::abs(det) > 1e-12 * scale) {
      target[0] = p[0] - (J[1][1] * F0[0] - J[0][1] * F0[1]) / det;
      target[1] = p[1] - (-J[1][0] * F0[0] + J[0][0] * F0[1]) / det;
    }
  }

  // affine(target) + (m − affine(pm)) − u
  const Grid& grid = u.grid();
  Correction c{Samples(u.size()), Samples(u.size())};
  const double da = target[0] - pm[0];
  const double db = target[1] - pm[1];
  for (std::size_t i = 0; i < u.size(); ++i) {
    c.du_u[i] = m.u()[i] + da + db * grid.node(i) - u.u()[i];
    c.du_du[i] = m.du()[i] + db - u.du()[i];
  }
  return c;
}

std::optional<GridFunction> step(const GridFunction& u, const Correction& c, double theta) {
  Samples nu(u.size());
  Samples ndu(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    nu[i] = u.u()[i] + theta * c.du_u[i];
    ndu[i] = u.du()[i] + theta * c.du_du[i];
    if (!std::isfinite(nu[i]) || !std::isfinite(ndu[i])) return std::nullopt;
  }
  return GridFunction(u.grid(), std::move(nu), std::move(ndu));
}

// One λ stage. Returns the converged iterate or the best one seen on failure.
std::variant<StageOutcome, StageFailure> run_stage(const ProblemSpec& spec, GridFunction u, double lambda) {
  const SolverOptions& opt = spec.options;
  const IterationScheme scheme = spec.scheme();
  auto M = [&](const GridFunction& g) { return apply_operator(spec, g, lambda); };

  double theta = opt.theta0;
  double previous = kInf;
  double best = kInf;
  GridFunction best_u = u;
  for (int k = 0;; ++k) {
    GridFunction m = u;
    try {
      m = M(u);
    } catch (const EvalDomain& e) {
      // A fault at the very first iterate is a problem-definition fault; later ones mean divergence.
      if (k == 0) throw;
      return StageFailure{best_u, k, best, e.what()};
    } catch (const DomainViolation& e) {
      if (k == 0) throw;
      return StageFailure{best_u, k, best, e.what()};
    }
    const double residual = c1_distance(u, m);
    if (residual < best) {
      best = residual;
      best_u = u;
    }
    if (residual <= opt.tol_fp * (1.0 + norms(u).c1)) return StageOutcome{std::move(u), k, residual};
    if (k >= opt.max_iter) return StageFailure{best_u, k, best, "iteration limit reached"};

    if (k > 0) theta = residual > previous ? std::max(0.5 * theta, opt.theta_min)
                                           : std::min(opt.theta_growth * theta, 1.0);
    previous = residual;

    const Correction c =
        scheme == IterationScheme::NewtonPicard ? newton_picard_correction(u, m, M) : picard_correction(u, m);
    std::optional<GridFunction> next = step(u, c, theta);
    if (!next) return StageFailure{best_u, k, best, "iterate overflowed"};
    u = std::move(*next);
  }
}

SolveReport make_report(const ProblemSpec& spec, GridFunction u, std::vector<LambdaStage> path, bool converged) {
  SolveReport r{std::move(u), 0.0, 0.0, 0.0, 0.0, std::move(path), converged, std::nullopt, spec.scheme()};
  try {
    r.fp_residual = c1_distance(r.solution, apply_operator(spec, r.solution, 1.0));
  } catch (const Error&) {
    r.fp_residual = kInf;
  }
  try {
    r.ode_residual = ode_residual(spec, r.solution);
  } catch (const Error&) {
    r.ode_residual = kInf;
  }
  r.bc_residual = bc_residual(spec.bc, r.solution);
  r.consistency_defect = consistency_defect(r.solution);
  if (spec.bc == BoundaryClass::DirichletBounded) {
    try {
      const Samples h = cumulative_integral_from_0(r.solution.grid(), nemytskii(spec.f, r.solution));
      r.omega_margin = 0.5 * spec.phi.scale() - sup_norm(h);
    } catch (const Error&) {
      r.omega_margin = -kInf;
    }
  }
  return r;
}

[[noreturn]] void fail(const ProblemSpec& spec, const StageFailure& failure, double lambda,
                       std::vector<LambdaStage> path) {
  path.push_back({lambda, failure.iterations});
  auto report = std::make_shared<const SolveReport>(make_report(spec, failure.best, std::move(path), false));
  throw NonConvergence(failure.best_residual, failure.iterations, lambda, std::move(report));
}

}  // namespace

NonConvergence::NonConvergence(double best_residual, int iterations, double lambda,
                               std::shared_ptr<const SolveReport> report)
    : Error(fmt::format("fixed-point iteration did not converge at lambda = {:g} after {} iterations "
                        "(best residual {:.6g})",
                        lambda, iterations, best_residual)),
      best_residual_(best_residual),
      iterations_(iterations),
      lambda_(lambda),
      report_(std::move(report)) {}

std::string_view to_string(BoundaryClass bc) {
  switch (bc) {
    case BoundaryClass::DirichletBounded: return "dirichlet";
    case BoundaryClass::ThreePointSingular: return "threepoint_singular";
    case BoundaryClass::ThreePointClassic: return "threepoint_classic";
  }
  return "?";
}

BoundaryClass parse_boundary_class(std::string_view name) {
  for (BoundaryClass bc : {BoundaryClass::DirichletBounded, BoundaryClass::ThreePointSingular,
                           BoundaryClass::ThreePointClassic})
    if (to_string(bc) == name) return bc;
  throw std::invalid_argument(fmt::format(
      "unknown problem '{}' (expected dirichlet, threepoint_singular or threepoint_classic)", name));
}

HomeoKind required_kind(BoundaryClass bc) {
  switch (bc) {
    case BoundaryClass::DirichletBounded: return HomeoKind::Bounded;
    case BoundaryClass::ThreePointSingular: return HomeoKind::Singular;
    case BoundaryClass::ThreePointClassic: return HomeoKind::Classic;
  }
  return HomeoKind::Classic;
}

std::string_view to_string(IterationScheme scheme) {
  return scheme == IterationScheme::Picard ? "picard" : "newton_picard";
}

IterationScheme parse_iteration_scheme(std::string_view name) {
  if (name == "picard") return IterationScheme::Picard;
  if (name == "newton_picard") return IterationScheme::NewtonPicard;
  throw std::invalid_argument(fmt::format("unknown iteration '{}' (expected picard or newton_picard)", name));
}

void ProblemSpec::validate() const {
  if (phi.kind() != required_kind(bc))
    throw std::invalid_argument(fmt::format("problem {} needs a {} phi, got '{}' ({})", to_string(bc),
                                            to_string(required_kind(bc)), phi.describe(), to_string(phi.kind())));
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument(fmt::format("T must be positive, got {}", T));
  if (grid_n < 3) throw std::invalid_argument(fmt::format("grid_n must be at least 3, got {}", grid_n));
  const SolverOptions& o = options;
  if (!(o.tol_fp > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(o.lambda_step > 0.0 && o.lambda_step <= 1.0))
    throw std::invalid_argument(fmt::format("lambda_step must lie in (0, 1], got {}", o.lambda_step));
  if (!(o.theta0 > 0.0 && o.theta0 <= 1.0) || !(o.theta_min > 0.0 && o.theta_min <= o.theta0))
    throw std::invalid_argument("damping must satisfy 0 < theta_min <= theta0 <= 1");
  if (o.max_iter < 1) throw std::invalid_argument("max_iter must be positive");
}

IterationScheme ProblemSpec::scheme() const {
  if (options.scheme) return *options.scheme;
  return bc == BoundaryClass::ThreePointClassic ? IterationScheme::NewtonPicard : IterationScheme::Picard;
}

GridFunction apply_operator(const ProblemSpec& spec, const GridFunction& gf, double lambda) {
  switch (spec.bc) {
    case BoundaryClass::DirichletBounded: return dirichlet_M(spec.phi, spec.f, gf, lambda);
    case BoundaryClass::ThreePointSingular: return threepoint_singular_M(spec.phi, spec.f, gf);
    case BoundaryClass::ThreePointClassic: return threepoint_classic_M1(spec.phi, spec.f, gf, lambda);
  }
  throw std::logic_error("unhandled boundary class");
}

SolveReport solve(const ProblemSpec& spec) {
  spec.validate();
  const SolverOptions& opt = spec.options;
  GridFunction u(spec.grid());
  std::vector<LambdaStage> path;

  if (spec.bc == BoundaryClass::ThreePointSingular) {
    auto outcome = run_stage(spec, u, 1.0);
    if (auto* failure = std::get_if<StageFailure>(&outcome)) fail(spec, *failure, 1.0, path);
    auto& done = std::get<StageOutcome>(outcome);
    path.push_back({1.0, done.iterations});
    return make_report(spec, std::move(done.u), std::move(path), true);
  }

  double lambda = 0.0;
  double step_size = opt.lambda_step;
  bool first = true;
  while (first || lambda < 1.0) {
    double next = first ? 0.0 : std::min(1.0, lambda + step_size);
    if (1.0 - next < 1e-12) next = 1.0;
    std::variant<StageOutcome, StageFailure> outcome{StageFailure{u, 0, kInf, {}}};
    try {
      outcome = run_stage(spec, u, next);
    } catch (const OmegaViolation& e) {
      step_size *= 0.5;
      if (first || step_size < opt.min_lambda_step) throw OmegaViolation(e.norm(), e.half_a(), next);
      continue;
    }
    if (auto* failure = std::get_if<StageFailure>(&outcome)) fail(spec, *failure, next, path);
    auto& done = std::get<StageOutcome>(outcome);
    path.push_back({next, done.iterations});
    u = std::move(done.u);
    lambda = next;
    first = false;
    step_size = std::min(2.0 * step_size, opt.lambda_step);
  }
  return make_report(spec, std::move(u), std::move(path), true);
}

Samples ode_residual_profile(const ProblemSpec& spec, const GridFunction& gf) {
  const Grid& grid = gf.grid();
  const std::size_t n = grid.size();
  const double h = grid.step();
  Samples flux(n);
  for (std::size_t i = 0; i < n; ++i) flux[i] = spec.phi.apply(gf.du()[i]);
  const Samples rhs = nemytskii(spec.f, gf);

  Samples out(n);
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (flux[i + 1] - flux[i - 1]) / (2.0 * h) - rhs[i];
  if (n >= 3) {
    out[0] = (-3.0 * flux[0] + 4.0 * flux[1] - flux[2]) / (2.0 * h) - rhs[0];
    out[n - 1] = (3.0 * flux[n - 1] - 4.0 * flux[n - 2] + flux[n - 3]) / (2.0 * h) - rhs[n - 1];
  }
  return out;
}

double ode_residual(const ProblemSpec& spec, const GridFunction& gf) {
  Samples profile;
  try {
    profile = ode_residual_profile(spec, gf);
  } catch (const DomainViolation&) {
    return kInf;
  }
  double r = 0.0;
  for (std::size_t i = 1; i + 1 < profile.size(); ++i) r = std::max(r, std::abs(profile[i]));
  return r;
}

double bc_residual(BoundaryClass bc, const GridFunction& gf) {
  const double u0 = gf.u().front();
  const double uT = gf.u().back();
  const double du0 = gf.du().front();
  const double duT = gf.du().back();
  switch (bc) {
    case BoundaryClass::DirichletBounded: return std::max(std::abs(u0), std::abs(uT));
    case BoundaryClass::ThreePointSingular: return std::max(std::abs(uT - u0), std::abs(duT - u0));
    case BoundaryClass::ThreePointClassic: return std::max(std::abs(uT - du0), std::abs(duT - du0));
  }
  return kInf;
}

}  // namespace phibvp
