#include "phibvp/solver.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <fmt/format.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

namespace phibvp {
namespace {

using State = std::array<double, 2>;
using Vec2 = std::array<double, 2>;

struct Trajectory {
  Samples u;
  Samples w;  // φ(u')
};

// RK4 over the grid nodes for u' = φ⁻¹(w), w' = f(t, u, φ⁻¹(w)).
Trajectory integrate(const ProblemSpec& spec, const Grid& grid, double u0, double w0) {
  boost::numeric::odeint::runge_kutta4<State> stepper;
  auto rhs = [&](const State& x, State& dx, double t) {
    const double slope = spec.phi.apply_inverse(x[1]);
    dx[0] = slope;
    dx[1] = spec.f.eval(t, x[0], slope);
  };
  Trajectory tr{Samples(grid.size()), Samples(grid.size())};
  State x{u0, w0};
  tr.u[0] = u0;
  tr.w[0] = w0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double t = grid.node(i);
    stepper.do_step(rhs, x, t, grid.node(i + 1) - t);
    if (!std::isfinite(x[0]) || !std::isfinite(x[1])) throw EvalDomain("trajectory blew up", static_cast<long>(i + 1));
    tr.u[i + 1] = x[0];
    tr.w[i + 1] = x[1];
  }
  return tr;
}

GridFunction to_grid_function(const ProblemSpec& spec, const Grid& grid, Trajectory tr) {
  Samples du(grid.size());
  for (std::size_t i = 0; i < du.size(); ++i) du[i] = spec.phi.apply_inverse(tr.w[i]);
  return GridFunction(grid, std::move(tr.u), std::move(du));
}

template <class F>
std::optional<double> guarded(F&& f) {
  try {
    const double r = f();
    if (std::isfinite(r)) return r;
  } catch (const Error&) {
  }
  return std::nullopt;
}

template <class F>
std::optional<Vec2> guarded2(F&& f) {
  try {
    const Vec2 r = f();
    if (std::isfinite(r[0]) && std::isfinite(r[1])) return r;
  } catch (const Error&) {
  }
  return std::nullopt;
}

double max_abs(const Vec2& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

// u(0) = 0 is fixed; scan w(0) over (−a, a) for a sign change of u(T), then TOMS 748.
GridFunction shoot_dirichlet(const ProblemSpec& spec, const Grid& grid) {
  const double a = spec.phi.scale();
  const double edge = a * (1.0 - 1e-9);
  auto end_value = [&](double w0) { return guarded([&] { return integrate(spec, grid, 0.0, w0).u.back(); }); };

  constexpr int kScan = 80;
  std::vector<std::pair<double, std::optional<double>>> scan;
  for (int k = 0; k <= kScan; ++k) {
    const double w0 = k == kScan / 2 ? 0.0 : -edge + 2.0 * edge * k / kScan;
    scan.emplace_back(w0, end_value(w0));
  }

  std::optional<std::pair<double, double>> bracket;
  double best_centre = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < scan.size(); ++k) {
    const auto& [w, g] = scan[k];
    if (g && *g == 0.0) return to_grid_function(spec, grid, integrate(spec, grid, 0.0, w));
    if (k + 1 == scan.size()) break;
    const auto& [w1, g1] = scan[k + 1];
    if (!g || !g1 || (*g > 0.0) == (*g1 > 0.0)) continue;
    const double centre = std::abs(0.5 * (w + w1));
    if (centre < best_centre) {
      best_centre = centre;
      bracket = std::make_pair(w, w1);
    }
  }
  if (!bracket) throw OracleFailure("dirichlet shooting: no sign change of u(T) over w(0) in (-a, a)");

  auto residual = [&](double w0) {
    const std::optional<double> g = end_value(w0);
    if (!g) throw OracleFailure(fmt::format("dirichlet shooting: trajectory failed at w(0) = {}", w0));
    return *g;
  };
  std::uintmax_t max_iter = 200;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      residual, bracket->first, bracket->second, boost::math::tools::eps_tolerance<double>(52), max_iter);
  const double w0 = std::abs(residual(lo)) <= std::abs(residual(hi)) ? lo : hi;
  return to_grid_function(spec, grid, integrate(spec, grid, 0.0, w0));
}

// Damped Newton with a forward-difference Jacobian (step 1e-6).
template <class Residual>
std::optional<Vec2> newton2(const Residual& residual, Vec2 x) {
  std::optional<Vec2> r = residual(x);
  if (!r) return std::nullopt;
  for (int it = 0; it < 100; ++it) {
    if (max_abs(*r) <= 1e-12 * (1.0 + max_abs(x))) return x;
    double J[2][2];
    for (int j = 0; j < 2; ++j) {
      Vec2 xj = x;
      const double delta = 1e-6 * std::max(1.0, std::abs(x[j]));
      xj[j] += delta;
      const std::optional<Vec2> rj = residual(xj);
      if (!rj) return std::nullopt;
      for (int i = 0; i < 2; ++i) J[i][j] = ((*rj)[i] - (*r)[i]) / delta;
    }
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (!std::isfinite(det) || det == 0.0) return std::nullopt;
    const Vec2 dx{-(J[1][1] * (*r)[0] - J[0][1] * (*r)[1]) / det, -(-J[1][0] * (*r)[0] + J[0][0] * (*r)[1]) / det};

    bool accepted = false;
    for (double damping = 1.0; damping > 1e-6; damping *= 0.5) {
      const Vec2 trial{x[0] + damping * dx[0], x[1] + damping * dx[1]};
      const std::optional<Vec2> rt = residual(trial);
      if (rt && max_abs(*rt) < max_abs(*r)) {
        x = trial;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) return max_abs(*r) <= 1e-10 ? std::optional<Vec2>(x) : std::nullopt;
  }
  return max_abs(*r) <= 1e-10 ? std::optional<Vec2>(x) : std::nullopt;
}

constexpr std::array<Vec2, 7> kStarts{Vec2{0.0, 0.0}, Vec2{0.0, 1.0},  Vec2{0.0, -1.0}, Vec2{1.0, 1.0},
                                      Vec2{-1.0, -1.0}, Vec2{0.0, 0.5}, Vec2{0.0, -0.5}};

// Unknowns (u(0), u'(0)); targets u'(T) = u'(0) and u(T) = u'(0).
GridFunction shoot_classic(const ProblemSpec& spec, const Grid& grid) {
  auto residual = [&](const Vec2& x) {
    return guarded2([&] {
      const Trajectory tr = integrate(spec, grid, x[0], spec.phi.apply(x[1]));
      const double slope_T = spec.phi.apply_inverse(tr.w.back());
      return Vec2{slope_T - x[1], tr.u.back() - x[1]};
    });
  };
  for (const Vec2& start : kStarts) {
    if (const std::optional<Vec2> x = newton2(residual, start))
      return to_grid_function(spec, grid, integrate(spec, grid, (*x)[0], spec.phi.apply((*x)[1])));
  }
  throw OracleFailure("threepoint_classic shooting: Newton did not converge from any start");
}

// Unknowns (u(0), w(0)); targets u(T) = u(0) and u'(T) = u(0).
GridFunction shoot_singular(const ProblemSpec& spec, const Grid& grid) {
  auto residual = [&](const Vec2& x) {
    return guarded2([&] {
      const Trajectory tr = integrate(spec, grid, x[0], x[1]);
      return Vec2{tr.u.back() - x[0], spec.phi.apply_inverse(tr.w.back()) - x[0]};
    });
  };
  for (const Vec2& start : kStarts) {
    if (const std::optional<Vec2> x = newton2(residual, start))
      return to_grid_function(spec, grid, integrate(spec, grid, (*x)[0], (*x)[1]));
  }
  throw OracleFailure("threepoint_singular shooting: Newton did not converge from any start");
}

}  // namespace

GridFunction shooting_oracle(const ProblemSpec& spec) {
  spec.validate();
  const Grid grid = spec.grid();
  switch (spec.bc) {
    case BoundaryClass::DirichletBounded: return shoot_dirichlet(spec, grid);
    case BoundaryClass::ThreePointClassic: return shoot_classic(spec, grid);
    case BoundaryClass::ThreePointSingular: return shoot_singular(spec, grid);
  }
  throw std::logic_error("unhandled boundary class");
}

}  // namespace phibvp
