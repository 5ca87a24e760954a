#pragma once

// Sampled checks of the existence hypotheses and the explicit a-priori constants.
// A passing check means "held at every point of the stated sample grid", nothing more.

#include "phibvp/expr.hpp"
#include "phibvp/function_space.hpp"
#include "phibvp/homeomorphism.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace phibvp {

/// Sampling box [0, T] × [−x_half, x_half] × [−y_half, y_half], `samples` points per axis.
struct SampleBox {
  double x_half = 10.0;
  double y_half = 10.0;
  int samples = 101;
};

enum class Verdict { CheckedOnGrid, FailedAt, NotApplicable };

std::string_view to_string(Verdict v);

struct Witness {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
  std::string condition;
};

/// Dirichlet problem with a bounded φ: h ≥ 0, ‖h‖_{L¹} < a/2, φ(y)n'(x)y ≥ 0, n(0) = 0 and
/// |f(t,x,y)| ≤ f(t,x,y)n(x) + h(t).
struct GrowthCertificate {
  Verdict verdict = Verdict::NotApplicable;
  std::optional<Witness> witness;
  std::string detail;
  SampleBox box;
  double h_l1 = 0.0;
  double half_a = 0.0;
  std::optional<double> L;         ///< bound on ‖u'‖∞
  std::optional<double> c1_bound;  ///< L + LT, bound on ‖u‖₁
  double sign_margin = 0.0;        ///< min φ(y)n'(x)y over the samples
  double growth_margin = 0.0;      ///< min f·n + h − |f| over the samples
};

/// Three-point problem with a classic φ: f ≥ c and the slope conditions at m1 < m2, the latter
/// checked through the pointwise surrogate f > 0 for y ≥ m2, f < 0 for y ≤ m1.
struct SignCertificate {
  Verdict verdict = Verdict::NotApplicable;
  std::optional<Witness> witness;
  std::string detail;
  SampleBox box;
  double m1 = 0.0;
  double m2 = 0.0;
  double c_neg_l1 = 0.0;  ///< ‖c⁻‖_{L¹}
  double L = 0.0;         ///< max{|φ(m2)|, |φ(m1)|}
  std::optional<double> r;        ///< bound on ‖u'‖∞, set only when checked
  std::optional<double> rho_min;  ///< r(2 + T), set only when checked
};

struct DegreeResult {
  double radius = 0.0;
  int winding = 0;
  double min_boundary_norm = 0.0;
  int refinement_depth = 0;
  int evaluations = 0;
};

struct WindingOptions {
  int initial_samples = 256;
  int max_depth = 20;
  double zero_tolerance = 1e-9;  ///< relative to the largest |G| among the initial samples
};

using PlanarMap = std::function<std::array<double, 2>(double, double)>;

/// Throws InconsistentDerivative when dn differs from a central difference of n by more than
/// 1e-6 relative at any probe in [−half_width, half_width].
void check_derivative_pair(const Expr& n, const Expr& dn, double half_width);

/// h is an expression of t, n and dn expressions of u. The default box is
/// X = Y = max(10, 2(L + LT)). Throws std::invalid_argument unless φ is bounded.
GrowthCertificate check_growth(const Homeomorphism& phi, const Expr& f, const Expr& h, const Expr& n,
                               const Expr& dn, double T, std::optional<SampleBox> box = std::nullopt,
                               std::size_t grid_n = kDefaultGridNodes);

/// c is an expression of t. The default box is X = Y = max(10, 2ρ_min). Throws
/// std::invalid_argument unless φ is classic and m1 < m2.
SignCertificate check_signs(const Homeomorphism& phi, const Expr& f, double m1, double m2, const Expr& c, double T,
                            std::optional<SampleBox> box = std::nullopt, std::size_t grid_n = kDefaultGridNodes);

/// G(a, b) = (aT + bT² − bT − (1/T)∫₀ᵀ f(t, a + bt, b) dt, b − a − bT), composite Simpson with
/// `simpson_nodes` (odd) nodes.
std::array<double, 2> g_map(const Expr& f, double T, double a, double b, std::size_t simpson_nodes = 201);

/// Winding number of `map` along the circle of the given radius around the origin.
/// Arcs whose angle increment exceeds π/2 are bisected. Throws BoundaryZero when |map| gets
/// below the zero tolerance on the circle or an arc cannot be resolved within max_depth.
DegreeResult winding_number(const PlanarMap& map, double radius, const WindingOptions& options = {});

/// deg_B(G, B_ρ, 0) through winding_number.
DegreeResult brouwer_degree(const Expr& f, double T, double radius, const WindingOptions& options = {});

/// `key=value` lines, one per field.
std::string to_key_value(const GrowthCertificate& cert);
std::string to_key_value(const SignCertificate& cert);
std::string to_key_value(const DegreeResult& degree);

}  // namespace phibvp
