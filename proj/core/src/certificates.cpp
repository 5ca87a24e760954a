#include "phibvp/certificates.hpp"

#include "phibvp/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace phibvp {
namespace {

constexpr double kSlack = 1e-12;

std::vector<double> axis(double lo, double hi, int samples) {
  std::vector<double> out(samples);
  for (int k = 0; k < samples; ++k)
    out[k] = samples == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(samples - 1);
  out.back() = hi;
  return out;
}

void require_box(const SampleBox& box) {
  if (box.samples < 2 || !(box.x_half >= 0.0) || !(box.y_half >= 0.0))
    throw std::invalid_argument("sample box needs at least 2 samples per axis and non-negative half widths");
}

std::string format_witness(const Witness& w) {
  return fmt::format("{} fails at t = {:.17g}, x = {:.17g}, y = {:.17g}", w.condition, w.t, w.x, w.y);
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::CheckedOnGrid: return "checked_on_grid";
    case Verdict::FailedAt: return "failed_at";
    case Verdict::NotApplicable: return "not_applicable";
  }
  return "?";
}

void check_derivative_pair(const Expr& n, const Expr& dn, double half_width) {
  constexpr int kProbes = 41;
  for (double x : axis(-half_width, half_width, kProbes)) {
    const double delta = 1e-5 * (1.0 + std::abs(x));
    const double estimate = (n.eval(0.0, x + delta, 0.0) - n.eval(0.0, x - delta, 0.0)) / (2.0 * delta);
    const double supplied = dn.eval(0.0, x, 0.0);
    if (std::abs(estimate - supplied) > 1e-6 * std::max(1.0, std::abs(supplied)))
      throw InconsistentDerivative(x, supplied, estimate);
  }
}

GrowthCertificate check_growth(const Homeomorphism& phi, const Expr& f, const Expr& h, const Expr& n,
                               const Expr& dn, double T, std::optional<SampleBox> box, std::size_t grid_n) {
  if (phi.kind() != HomeoKind::Bounded)
    throw std::invalid_argument(fmt::format("growth check needs a bounded phi, got '{}'", phi.describe()));
  const Grid grid(T, grid_n);

  GrowthCertificate cert;
  cert.half_a = 0.5 * phi.scale();
  cert.h_l1 = l1_norm(grid, grid.sample([&](double t) { return h.eval(t, 0.0, 0.0); }));
  if (!(cert.h_l1 < cert.half_a)) {
    cert.verdict = Verdict::NotApplicable;
    cert.detail = fmt::format("h_l1 = {:g} >= a/2 = {:g}", cert.h_l1, cert.half_a);
    if (box) cert.box = *box;
    return cert;
  }
  const double L = std::max(std::abs(phi.apply_inverse(-2.0 * cert.h_l1)), std::abs(phi.apply_inverse(2.0 * cert.h_l1)));
  cert.L = L;
  cert.c1_bound = L + L * T;
  const double default_half = std::max(10.0, 2.0 * *cert.c1_bound);
  cert.box = box.value_or(SampleBox{default_half, default_half, 101});
  require_box(cert.box);

  check_derivative_pair(n, dn, cert.box.x_half);

  auto fail = [&](double t, double x, double y, std::string condition) {
    cert.verdict = Verdict::FailedAt;
    cert.witness = Witness{t, x, y, std::move(condition)};
    cert.detail = format_witness(*cert.witness);
    return cert;
  };

  if (std::abs(n.eval(0.0, 0.0, 0.0)) > kSlack) return fail(0.0, 0.0, 0.0, "n(0) = 0");

  const std::vector<double> ts = axis(0.0, T, cert.box.samples);
  const std::vector<double> xs = axis(-cert.box.x_half, cert.box.x_half, cert.box.samples);
  const std::vector<double> ys = axis(-cert.box.y_half, cert.box.y_half, cert.box.samples);
  std::vector<double> n_x(xs.size()), dn_x(xs.size()), phi_y(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    n_x[i] = n.eval(0.0, xs[i], 0.0);
    dn_x[i] = dn.eval(0.0, xs[i], 0.0);
  }
  for (std::size_t j = 0; j < ys.size(); ++j) phi_y[j] = phi.apply(ys[j]);

  cert.sign_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      const double value = phi_y[j] * dn_x[i] * ys[j];
      cert.sign_margin = std::min(cert.sign_margin, value);
      if (value < -kSlack) return fail(0.0, xs[i], ys[j], "phi(y) n'(x) y >= 0");
    }
  }

  cert.growth_margin = std::numeric_limits<double>::infinity();
  for (double t : ts) {
    const double ht = h.eval(t, 0.0, 0.0);
    if (ht < 0.0) return fail(t, 0.0, 0.0, "h(t) >= 0");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (double y : ys) {
        const double fv = f.eval(t, xs[i], y);
        const double margin = fv * n_x[i] + ht - std::abs(fv);
        cert.growth_margin = std::min(cert.growth_margin, margin);
        if (margin < -kSlack) return fail(t, xs[i], y, "|f| <= f n(x) + h(t)");
      }
    }
  }

  cert.verdict = Verdict::CheckedOnGrid;
  cert.detail = fmt::format("all conditions hold on {}^3 samples", cert.box.samples);
  return cert;
}

SignCertificate check_signs(const Homeomorphism& phi, const Expr& f, double m1, double m2, const Expr& c, double T,
                            std::optional<SampleBox> box, std::size_t grid_n) {
  if (phi.kind() != HomeoKind::Classic)
    throw std::invalid_argument(fmt::format("sign check needs a classic phi, got '{}'", phi.describe()));
  if (!(m1 < m2)) throw std::invalid_argument(fmt::format("sign check needs m1 < m2, got {} and {}", m1, m2));
  const Grid grid(T, grid_n);

  SignCertificate cert;
  cert.m1 = m1;
  cert.m2 = m2;
  const Samples c_samples = grid.sample([&](double t) { return c.eval(t, 0.0, 0.0); });
  cert.c_neg_l1 = integral(grid, pos_neg_parts(c_samples).second);
  cert.L = std::max(std::abs(phi.apply(m2)), std::abs(phi.apply(m1)));
  const double shift = cert.L + 2.0 * cert.c_neg_l1;
  const double r = std::max(std::abs(phi.apply_inverse(shift)), std::abs(phi.apply_inverse(-shift)));
  const double rho_min = r * (2.0 + T);
  const double default_half = std::max(10.0, 2.0 * rho_min);
  cert.box = box.value_or(SampleBox{default_half, default_half, 101});
  require_box(cert.box);

  auto fail = [&](double t, double x, double y, std::string condition) {
    cert.verdict = Verdict::FailedAt;
    cert.witness = Witness{t, x, y, std::move(condition)};
    cert.detail = format_witness(*cert.witness);
    return cert;
  };

  const std::vector<double> ts = axis(0.0, T, cert.box.samples);
  const std::vector<double> xs = axis(-cert.box.x_half, cert.box.x_half, cert.box.samples);
  std::vector<double> ys = axis(-cert.box.y_half, cert.box.y_half, cert.box.samples);
  for (double m : {m1, m2})
    if (std::abs(m) <= cert.box.y_half) ys.push_back(m);
  std::sort(ys.begin(), ys.end());

  for (double t : ts) {
    const double ct = c.eval(t, 0.0, 0.0);
    for (double x : xs) {
      for (double y : ys) {
        const double fv = f.eval(t, x, y);
        if (fv < ct - kSlack) return fail(t, x, y, "f(t,x,y) >= c(t)");
        if (y >= m2 && !(fv > 0.0)) return fail(t, x, y, "f > 0 for y >= m2 (pointwise surrogate)");
        if (y <= m1 && !(fv < 0.0)) return fail(t, x, y, "f < 0 for y <= m1 (pointwise surrogate)");
      }
    }
  }

  cert.verdict = Verdict::CheckedOnGrid;
  cert.r = r;
  cert.rho_min = rho_min;
  cert.detail = fmt::format("all conditions hold on {} x {} x {} samples", ts.size(), xs.size(), ys.size());
  return cert;
}

std::array<double, 2> g_map(const Expr& f, double T, double a, double b, std::size_t simpson_nodes) {
  if (simpson_nodes < 3 || simpson_nodes % 2 == 0)
    throw std::invalid_argument(fmt::format("Simpson rule needs an odd node count >= 3, got {}", simpson_nodes));
  const double h = T / static_cast<double>(simpson_nodes - 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < simpson_nodes; ++i) {
    const double t = i + 1 == simpson_nodes ? T : static_cast<double>(i) * h;
    const double weight = (i == 0 || i + 1 == simpson_nodes) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += weight * f.eval(t, a + b * t, b);
  }
  const double avg = (h / 3.0) * sum / T;
  return {a * T + b * T * T - b * T - avg, b - a - b * T};
}

DegreeResult winding_number(const PlanarMap& map, double radius, const WindingOptions& options) {
  if (!(radius > 0.0)) throw std::invalid_argument(fmt::format("winding radius must be positive, got {}", radius));
  if (options.initial_samples < 4) throw std::invalid_argument("winding needs at least 4 initial samples");

  struct Point {
    double theta;
    double gx;
    double gy;
  };
  DegreeResult result;
  result.radius = radius;
  result.min_boundary_norm = std::numeric_limits<double>::infinity();
  auto eval = [&](double theta) {
    const auto g = map(radius * std::cos(theta), radius * std::sin(theta));
    ++result.evaluations;
    result.min_boundary_norm = std::min(result.min_boundary_norm, std::hypot(g[0], g[1]));
    return Point{theta, g[0], g[1]};
  };

  const int n = options.initial_samples;
  std::vector<Point> ring;
  ring.reserve(n);
  double scale = 0.0;
  for (int k = 0; k < n; ++k) {
    ring.push_back(eval(2.0 * std::numbers::pi * k / n));
    scale = std::max(scale, std::hypot(ring.back().gx, ring.back().gy));
  }
  const double threshold = options.zero_tolerance * scale;
  if (!(scale > 0.0) || !std::isfinite(scale) || result.min_boundary_norm <= threshold)
    throw BoundaryZero(result.min_boundary_norm, threshold);

  double total = 0.0;
  auto increment = [](const Point& p, const Point& q) {
    double d = std::atan2(q.gy, q.gx) - std::atan2(p.gy, p.gx);
    if (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    return d;
  };
  auto arc = [&](auto&& self, const Point& p, const Point& q, int depth) -> void {
    const double d = increment(p, q);
    if (std::abs(d) <= 0.5 * std::numbers::pi) {
      total += d;
      return;
    }
    if (depth >= options.max_depth) throw BoundaryZero(result.min_boundary_norm, threshold);
    const Point mid = eval(0.5 * (p.theta + q.theta));
    if (result.min_boundary_norm <= threshold) throw BoundaryZero(result.min_boundary_norm, threshold);
    result.refinement_depth = std::max(result.refinement_depth, depth + 1);
    self(self, p, mid, depth + 1);
    self(self, mid, q, depth + 1);
  };
  for (int k = 0; k < n; ++k) {
    Point next = ring[(k + 1) % n];
    if (k + 1 == n) next.theta = 2.0 * std::numbers::pi;
    arc(arc, ring[k], next, 0);
  }

  const double turns = total / (2.0 * std::numbers::pi);
  result.winding = static_cast<int>(std::lround(turns));
  if (std::abs(turns - result.winding) > 1e-6)
    throw Error(fmt::format("winding accumulation drifted: {} turns", turns));
  return result;
}

DegreeResult brouwer_degree(const Expr& f, double T, double radius, const WindingOptions& options) {
  return winding_number([&](double a, double b) { return g_map(f, T, a, b); }, radius, options);
}

std::string to_key_value(const GrowthCertificate& cert) {
  std::string out = fmt::format("certificate=growth\nverdict={}\n", to_string(cert.verdict));
  out += fmt::format("h_l1={:.17g}\na_half={:.17g}\n", cert.h_l1, cert.half_a);
  if (cert.L) out += fmt::format("L={:.17g}\nc1_bound={:.17g}\n", *cert.L, *cert.c1_bound);
  out += fmt::format("box_x={:.17g}\nbox_y={:.17g}\nsamples={}\n", cert.box.x_half, cert.box.y_half, cert.box.samples);
  if (cert.verdict == Verdict::CheckedOnGrid)
    out += fmt::format("sign_margin={:.17g}\ngrowth_margin={:.17g}\n", cert.sign_margin, cert.growth_margin);
  if (cert.witness)
    out += fmt::format("witness_condition={}\nwitness_t={:.17g}\nwitness_x={:.17g}\nwitness_y={:.17g}\n",
                       cert.witness->condition, cert.witness->t, cert.witness->x, cert.witness->y);
  out += fmt::format("detail={}\n", cert.detail);
  return out;
}

std::string to_key_value(const SignCertificate& cert) {
  std::string out = fmt::format("certificate=signs\nverdict={}\n", to_string(cert.verdict));
  out += "sign_condition=pointwise_surrogate\n";
  out += fmt::format("m1={:.17g}\nm2={:.17g}\nc_neg_l1={:.17g}\nL={:.17g}\n", cert.m1, cert.m2, cert.c_neg_l1, cert.L);
  if (cert.r) out += fmt::format("r={:.17g}\nrho_min={:.17g}\n", *cert.r, *cert.rho_min);
  out += fmt::format("box_x={:.17g}\nbox_y={:.17g}\nsamples={}\n", cert.box.x_half, cert.box.y_half, cert.box.samples);
  if (cert.witness)
    out += fmt::format("witness_condition={}\nwitness_t={:.17g}\nwitness_x={:.17g}\nwitness_y={:.17g}\n",
                       cert.witness->condition, cert.witness->t, cert.witness->x, cert.witness->y);
  out += fmt::format("detail={}\n", cert.detail);
  return out;
}

std::string to_key_value(const DegreeResult& degree) {
  return fmt::format("rho={:.17g}\nwinding={}\nmin_boundary_norm={:.17g}\nrefinement_depth={}\nevaluations={}\n",
                     degree.radius, degree.winding, degree.min_boundary_norm, degree.refinement_depth,
                     degree.evaluations);
}

}  // namespace phibvp
