#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace phibvp {

/// Classic: ℝ → ℝ. Bounded: ℝ → (−a, a). Singular: (−a, a) → ℝ.
enum class HomeoKind { Classic, Bounded, Singular };

enum class HomeoFamily { Identity, Power, MeanCurvature, Relativistic };

/// Distance kept from ±a when evaluating a bounded inverse or a singular forward map.
inline constexpr double kDomainGuard = 1e-12;

/// An increasing odd homeomorphism φ with φ(0) = 0 from a small closed-form catalog.
///
/// Every instance has passed the construction checks: φ(0) = 0, strict monotonicity,
/// φ⁻¹∘φ = id to 1e-12 relative error and the range/domain bound on a probe set.
class Homeomorphism {
 public:
  /// identity; power(p), φ(y) = |y|^{p−2}y with p > 1; mean_curvature(a), φ(y) = a·y/√(1+y²);
  /// relativistic(a), φ(y) = y/√(1−(y/a)²). Throws std::invalid_argument on bad names or parameters.
  static Homeomorphism make(std::string_view name, const std::vector<double>& params = {});

  /// Parses `identity`, `power <p>`, `mean_curvature <a>` or `relativistic <a>`.
  static Homeomorphism parse(std::string_view text);

  static Homeomorphism identity() { return make("identity"); }
  static Homeomorphism power(double p) { return make("power", {p}); }
  static Homeomorphism mean_curvature(double a) { return make("mean_curvature", {a}); }
  static Homeomorphism relativistic(double a) { return make("relativistic", {a}); }

  HomeoKind kind() const noexcept { return kind_; }
  HomeoFamily family() const noexcept { return family_; }
  const std::vector<double>& params() const noexcept { return params_; }

  /// a for bounded and singular maps; +∞ for classic ones.
  double scale() const noexcept { return scale_; }

  /// Always true: decreasing maps are rejected at construction.
  bool increasing() const noexcept { return true; }

  /// φ(y). Throws DomainViolation for a singular φ when |y| > a − kDomainGuard.
  double apply(double y) const;

  /// φ⁻¹(x). Throws DomainViolation for a bounded φ when |x| > a − kDomainGuard.
  double apply_inverse(double x) const;

  /// Round-trippable description, e.g. "power 4".
  std::string describe() const;

 private:
  Homeomorphism(HomeoFamily family, std::vector<double> params);
  void verify() const;

  HomeoFamily family_;
  HomeoKind kind_;
  std::vector<double> params_;
  double scale_;
  double exponent_ = 2.0;
};

std::string_view to_string(HomeoKind kind);

}  // namespace phibvp
