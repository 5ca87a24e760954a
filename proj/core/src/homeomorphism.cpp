#include "phibvp/homeomorphism.hpp"

#include "phibvp/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace phibvp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kProbeCount = 1000;
constexpr double kProbeHalfWidth = 10.0;

double signed_pow(double x, double q) {
  const double m = std::abs(x);
  double r;
  if (q == 1.0)
    r = m;
  else if (q == 2.0)
    r = m * m;
  else if (q == 0.5)
    r = std::sqrt(m);
  else if (q == 3.0)
    r = m * m * m;
  else if (q == 1.0 / 3.0)
    r = std::cbrt(m);
  else
    r = std::pow(m, q);
  return std::copysign(r, x);
}

// Additive golden-ratio sequence on (0, 1).
double quasi_random(int k) {
  constexpr double kGolden = 0.6180339887498949;
  const double x = 0.5 + kGolden * static_cast<double>(k);
  return x - std::floor(x);
}

std::string_view family_name(HomeoFamily f) {
  switch (f) {
    case HomeoFamily::Identity: return "identity";
    case HomeoFamily::Power: return "power";
    case HomeoFamily::MeanCurvature: return "mean_curvature";
    case HomeoFamily::Relativistic: return "relativistic";
  }
  return "?";
}

}  // namespace

std::string_view to_string(HomeoKind kind) {
  switch (kind) {
    case HomeoKind::Classic: return "classic";
    case HomeoKind::Bounded: return "bounded";
    case HomeoKind::Singular: return "singular";
  }
  return "?";
}

Homeomorphism::Homeomorphism(HomeoFamily family, std::vector<double> params)
    : family_(family), kind_(HomeoKind::Classic), params_(std::move(params)), scale_(kInf) {
  switch (family_) {
    case HomeoFamily::Identity:
      break;
    case HomeoFamily::Power:
      exponent_ = params_[0] - 1.0;
      break;
    case HomeoFamily::MeanCurvature:
      kind_ = HomeoKind::Bounded;
      scale_ = params_[0];
      break;
    case HomeoFamily::Relativistic:
      kind_ = HomeoKind::Singular;
      scale_ = params_[0];
      break;
  }
}

Homeomorphism Homeomorphism::make(std::string_view name, const std::vector<double>& params) {
  auto expect_params = [&](std::size_t count) {
    if (params.size() != count)
      throw std::invalid_argument(
          fmt::format("phi '{}' takes {} parameter(s), got {}", name, count, params.size()));
  };
  auto expect_scale = [&] {
    expect_params(1);
    if (!(params[0] > 0.0) || !std::isfinite(params[0]))
      throw std::invalid_argument(fmt::format("phi '{}' needs a > 0, got {}", name, params[0]));
  };

  HomeoFamily family;
  if (name == "identity") {
    expect_params(0);
    family = HomeoFamily::Identity;
  } else if (name == "power") {
    expect_params(1);
    if (!(params[0] > 1.0) || !std::isfinite(params[0]))
      throw std::invalid_argument(fmt::format("phi 'power' needs p > 1, got {}", params[0]));
    family = HomeoFamily::Power;
  } else if (name == "mean_curvature") {
    expect_scale();
    family = HomeoFamily::MeanCurvature;
  } else if (name == "relativistic") {
    expect_scale();
    family = HomeoFamily::Relativistic;
  } else {
    throw std::invalid_argument(fmt::format("unknown phi '{}'", name));
  }

  Homeomorphism phi(family, params);
  phi.verify();
  return phi;
}

Homeomorphism Homeomorphism::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string name;
  if (!(in >> name)) throw std::invalid_argument("empty phi description");
  std::vector<double> params;
  std::string tok;
  while (in >> tok) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw std::invalid_argument(fmt::format("phi parameter '{}' is not a number", tok));
    params.push_back(x);
  }
  return make(name, params);
}

double Homeomorphism::apply(double y) const {
  switch (family_) {
    case HomeoFamily::Identity:
      return y;
    case HomeoFamily::Power:
      return signed_pow(y, exponent_);
    case HomeoFamily::MeanCurvature:
      return scale_ * y / std::hypot(1.0, y);
    case HomeoFamily::Relativistic: {
      const double limit = scale_ - kDomainGuard;
      if (!(std::abs(y) <= limit)) throw DomainViolation(y, -scale_, scale_);
      const double z = y / scale_;
      return y / std::sqrt((1.0 - z) * (1.0 + z));
    }
  }
  return y;
}

double Homeomorphism::apply_inverse(double x) const {
  switch (family_) {
    case HomeoFamily::Identity:
      return x;
    case HomeoFamily::Power:
      return signed_pow(x, 1.0 / exponent_);
    case HomeoFamily::MeanCurvature: {
      const double limit = scale_ - kDomainGuard;
      if (!(std::abs(x) <= limit)) throw DomainViolation(x, -scale_, scale_);
      const double z = x / scale_;
      return z / std::sqrt((1.0 - z) * (1.0 + z));
    }
    case HomeoFamily::Relativistic:
      return x / std::hypot(1.0, x / scale_);
  }
  return x;
}

std::string Homeomorphism::describe() const {
  std::string out(family_name(family_));
  for (double p : params_) out += fmt::format(" {}", p);
  return out;
}

void Homeomorphism::verify() const {
  if (std::abs(apply(0.0)) > 1e-14 || std::abs(apply_inverse(0.0)) > 1e-14)
    throw std::invalid_argument(fmt::format("phi '{}' does not fix 0", describe()));

  const double half_width = kind_ == HomeoKind::Singular ? scale_ * (1.0 - 1e-6) : kProbeHalfWidth;
  std::vector<double> probes(kProbeCount);
  for (int k = 0; k < kProbeCount; ++k) probes[k] = half_width * (2.0 * quasi_random(k) - 1.0);
  std::sort(probes.begin(), probes.end());

  double previous = -kInf;
  for (double y : probes) {
    const double x = apply(y);
    if (!(x > previous))
      throw std::invalid_argument(fmt::format("phi '{}' is not strictly increasing near y = {}", describe(), y));
    previous = x;
    if (kind_ == HomeoKind::Bounded && !(std::abs(x) < scale_))
      throw std::invalid_argument(fmt::format("phi '{}' leaves (-a, a) at y = {}", describe(), y));
    if (std::signbit(x) != std::signbit(y) && y != 0.0)
      throw std::invalid_argument(fmt::format("phi '{}' changes sign at y = {}", describe(), y));
    const double back = apply_inverse(x);
    if (std::abs(back - y) > 1e-12 * std::max(std::abs(y), std::numeric_limits<double>::min()))
      throw std::invalid_argument(
          fmt::format("phi '{}' inverse round trip fails at y = {}: got {}", describe(), y, back));
  }
}

}  // namespace phibvp
