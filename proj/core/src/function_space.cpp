#include "phibvp/function_space.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace phibvp {

Grid::Grid(double length, std::size_t nodes) : length_(length), nodes_(nodes), step_(0.0) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument(fmt::format("grid length must be a positive finite number, got {}", length));
  if (nodes < 2) throw std::invalid_argument(fmt::format("grid needs at least 2 nodes, got {}", nodes));
  step_ = length / static_cast<double>(nodes - 1);
}

Samples Grid::nodes() const {
  return sample([](double t) { return t; });
}

GridFunction::GridFunction(Grid grid, Samples u, Samples du)
    : grid_(grid), u_(std::move(u)), du_(std::move(du)) {
  if (u_.size() != grid_.size() || du_.size() != grid_.size())
    throw std::invalid_argument(fmt::format("grid function needs {} samples, got u: {}, du: {}", grid_.size(),
                                            u_.size(), du_.size()));
  for (std::size_t i = 0; i < u_.size(); ++i) {
    if (!std::isfinite(u_[i]) || !std::isfinite(du_[i]))
      throw std::invalid_argument(fmt::format("non-finite grid function sample at node {}", i));
  }
}

GridFunction::GridFunction(Grid grid) : GridFunction(grid, Samples(grid.size()), Samples(grid.size())) {}

GridFunction GridFunction::affine(const Grid& grid, double a, double b) {
  return GridFunction(grid, grid.sample([=](double t) { return a + b * t; }), Samples(grid.size(), b));
}

Samples cumulative_integral_from_0(const Grid& grid, std::span<const double> v) {
  assert(v.size() == grid.size());
  const double half_h = 0.5 * grid.step();
  Samples w(v.size());
  w[0] = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) w[i] = w[i - 1] + half_h * (v[i - 1] + v[i]);
  return w;
}

Samples cumulative_integral_to_T(const Grid& grid, std::span<const double> v) {
  Samples w = cumulative_integral_from_0(grid, v);
  const double total = w.back();
  for (double& x : w) x -= total;
  return w;
}

double integral(const Grid& grid, std::span<const double> v) {
  assert(v.size() == grid.size());
  double interior = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) interior += v[i];
  return grid.step() * (0.5 * (v.front() + v.back()) + interior);
}

double mean(const Grid& grid, std::span<const double> v) { return integral(grid, v) / grid.length(); }

double endpoint_T(std::span<const double> v) { return v.back(); }

double endpoint_0(std::span<const double> v) { return v.front(); }

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double l1_norm(const Grid& grid, std::span<const double> v) {
  Samples a(v.size());
  std::transform(v.begin(), v.end(), a.begin(), [](double x) { return std::abs(x); });
  return integral(grid, a);
}

Norms norms(const GridFunction& gf) {
  Norms n;
  n.sup = sup_norm(gf.u());
  n.l1 = l1_norm(gf.grid(), gf.u());
  n.c1 = n.sup + sup_norm(gf.du());
  return n;
}

std::pair<double, double> min_max(std::span<const double> v) {
  assert(!v.empty());
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

std::pair<Samples, Samples> pos_neg_parts(std::span<const double> v) {
  Samples pos(v.size());
  Samples neg(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    pos[i] = std::max(v[i], 0.0);
    neg[i] = std::max(-v[i], 0.0);
  }
  return {std::move(pos), std::move(neg)};
}

double consistency_defect(const GridFunction& gf) {
  const Samples integ = cumulative_integral_from_0(gf.grid(), gf.du());
  double defect = 0.0;
  for (std::size_t i = 0; i < gf.size(); ++i)
    defect = std::max(defect, std::abs(gf.u()[i] - gf.u()[0] - integ[i]));
  return defect;
}

double consistency_tolerance(const GridFunction& gf) { return 1e-6 * (1.0 + sup_norm(gf.du())); }

double c1_distance(const GridFunction& a, const GridFunction& b) {
  assert(a.grid() == b.grid());
  double du = 0.0;
  double ddu = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    du = std::max(du, std::abs(a.u()[i] - b.u()[i]));
    ddu = std::max(ddu, std::abs(a.du()[i] - b.du()[i]));
  }
  return du + ddu;
}

void write_csv(std::ostream& os, const GridFunction& gf) {
  os << "t,u,du\n";
  for (std::size_t i = 0; i < gf.size(); ++i)
    fmt::print(os, "{:.17g},{:.17g},{:.17g}\n", gf.grid().node(i), gf.u()[i], gf.du()[i]);
}

}  // namespace phibvp
