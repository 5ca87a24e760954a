#pragma once

// Discrete C¹([0,T]) functions on a uniform grid and the composite-trapezoid toolkit
// (H, K, Q, S, P, norms) the operators are built from.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace phibvp {

using Samples = std::vector<double>;

/// Uniform grid t_i = i·T/(n−1) on [0, T]; the last node is exactly T.
class Grid {
 public:
  Grid(double length, std::size_t nodes);

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return nodes_; }
  double step() const noexcept { return step_; }
  double node(std::size_t i) const noexcept {
    return i + 1 == nodes_ ? length_ : static_cast<double>(i) * step_;
  }
  Samples nodes() const;

  /// Samples a callable t ↦ g(t) at every node.
  template <class F>
  Samples sample(F&& g) const {
    Samples out(nodes_);
    for (std::size_t i = 0; i < nodes_; ++i) out[i] = g(node(i));
    return out;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double length_;
  std::size_t nodes_;
  double step_;
};

inline constexpr std::size_t kDefaultGridNodes = 1001;

/// A C¹ function stored as synchronized samples of u and u'.
class GridFunction {
 public:
  /// Throws std::invalid_argument on size mismatch or non-finite samples.
  GridFunction(Grid grid, Samples u, Samples du);

  /// The zero function.
  explicit GridFunction(Grid grid);

  /// t ↦ a + b·t with derivative b.
  static GridFunction affine(const Grid& grid, double a, double b);

  const Grid& grid() const noexcept { return grid_; }
  const Samples& u() const noexcept { return u_; }
  const Samples& du() const noexcept { return du_; }
  std::size_t size() const noexcept { return u_.size(); }

 private:
  Grid grid_;
  Samples u_;
  Samples du_;
};

struct Norms {
  double sup = 0.0;  ///< ‖u‖∞
  double l1 = 0.0;   ///< trapezoid ‖u‖_{L¹}
  double c1 = 0.0;   ///< ‖u‖∞ + ‖u'‖∞
};

/// H(v)(t) = ∫₀ᵗ v, composite trapezoid, H(v)(0) = 0.
Samples cumulative_integral_from_0(const Grid& grid, std::span<const double> v);

/// K(v)(t) = −∫ₜᵀ v, computed as H(v) − H(v)(T) so that K(v)(T) = 0 exactly.
Samples cumulative_integral_to_T(const Grid& grid, std::span<const double> v);

/// Trapezoid ∫₀ᵀ v.
double integral(const Grid& grid, std::span<const double> v);

/// Q(v) = (1/T)∫₀ᵀ v.
double mean(const Grid& grid, std::span<const double> v);

/// S(v) = v(T).
double endpoint_T(std::span<const double> v);

/// P(v) = v(0).
double endpoint_0(std::span<const double> v);

double sup_norm(std::span<const double> v);
double l1_norm(const Grid& grid, std::span<const double> v);
Norms norms(const GridFunction& gf);

/// (u_m, u_M).
std::pair<double, double> min_max(std::span<const double> v);

/// (u⁺, u⁻) with u⁺ = max(u, 0), u⁻ = max(−u, 0).
std::pair<Samples, Samples> pos_neg_parts(std::span<const double> v);

/// ‖u(t_i) − u(0) − H(u')(t_i)‖∞.
double consistency_defect(const GridFunction& gf);

/// 10⁻⁶·(1 + ‖u'‖∞).
double consistency_tolerance(const GridFunction& gf);

/// ‖a − b‖₁ in C¹; both must live on the same grid.
double c1_distance(const GridFunction& a, const GridFunction& b);

/// Header `t,u,du`, one row per node, 17 significant digits.
void write_csv(std::ostream& os, const GridFunction& gf);

}  // namespace phibvp
