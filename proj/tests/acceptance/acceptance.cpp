// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any criterion fails.

#include "phibvp/certificates.hpp"
#include "phibvp/errors.hpp"
#include "phibvp/operators.hpp"
#include "phibvp/solver.hpp"
#include "phibvp_cli/commands.hpp"

#include "oracles.hpp"
#include "parser_fixtures.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace phibvp;
namespace fs = std::filesystem;

// Pinned tolerances.
constexpr double kConstantTol = 1e-12;     // L, r, rho_min
constexpr double kBcTol = 1e-8;
constexpr double kOdeTol = 1e-4;           // n = 1001
constexpr double kDerivativeSlack = 1e-6;  // ‖du‖∞ ≤ L + slack
constexpr double kOracleTol = 1e-4;        // fixed point vs shooting, sup norm
constexpr double kAnalyticTol = 1e-6;      // cubic example vs u = ln2·t
constexpr double kQphiRel = 1e-12;         // |G_h(s)| ≤ 1e-12·T
constexpr double kShiftTol = 1e-10;
constexpr double kMeanTol = 1e-10;
constexpr double kOperatorTol = 1e-10;
constexpr double kMeanForcingTol = 1e-8;
constexpr double kRefinementRatio = 1.8;
constexpr double kExampleSeconds = 5.0;
constexpr double kQphiSeconds = 10.0;

const fs::path kProblems = PHIBVP_PROBLEMS_DIR;

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool condition, std::string what) {
    if (!condition) ok = false;
    notes.push_back(fmt::format("{}{}", condition ? "" : "FAILED ", what));
  }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<void(Check&)>& body) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, fmt::format("unexpected exception: {}", e.what()));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!c.ok) ++failures;
  std::string detail;
  for (const std::string& n : c.notes) detail += (detail.empty() ? "" : "; ") + n;
  fmt::print("[{}] {}. {} ({:.2f} s): {}\n", c.ok ? "PASS" : "FAIL", id, title, secs, detail);
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double sup_u_distance(const GridFunction& a, const GridFunction& b) {
  return testing::sup_abs_diff(a.u(), b.u());
}

int run_check(const fs::path& file, std::string& output) {
  std::ostringstream out, err;
  const fs::path dir = fs::temp_directory_path() / "phibvp-acceptance";
  const int code = cli::cmd_check(file, cli::CommandContext{dir, out, err});
  output = out.str() + err.str();
  fs::remove_all(dir);
  return code;
}

ProblemSpec make(BoundaryClass bc, const char* phi, const char* f, double T, std::size_t n = kDefaultGridNodes) {
  return ProblemSpec{bc, Homeomorphism::parse(phi), Expr::parse(f), T, n};
}

// Random C¹ input with closed-form derivative.
GridFunction random_input(std::mt19937_64& rng, const Grid& g, double scale) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const double c0 = scale * d(rng), c1 = scale * d(rng), c2 = 0.5 * scale * d(rng), p = 3.0 * d(rng);
  Samples u = g.sample([&](double t) { return c0 + c1 * std::sin(t + p) + c2 * std::cos(2 * t); });
  Samples du = g.sample([&](double t) { return c1 * std::cos(t + p) - 2 * c2 * std::sin(2 * t); });
  return GridFunction(g, std::move(u), std::move(du));
}

void mean_curvature_example(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  std::string out;
  const int code = run_check(kProblems / "mean_curvature_dirichlet.txt", out);
  c.require(code == cli::kOk, fmt::format("check exit {}", code));

  const ProblemSpec s = make(BoundaryClass::DirichletBounded, "mean_curvature 1", "u - 2", 0.1);
  const GrowthCertificate cert = check_growth(s.phi, s.f, Expr::parse("4"), Expr::parse("u"), Expr::parse("1"), s.T);
  c.require(cert.verdict == Verdict::CheckedOnGrid, fmt::format("verdict {}", to_string(cert.verdict)));
  c.require(std::abs(cert.h_l1 - 0.4) <= kConstantTol && cert.h_l1 < 0.5, fmt::format("h_l1 = {:.15g}", cert.h_l1));
  const double L = cert.L.value_or(NAN);
  c.require(std::abs(L - 4.0 / 3.0) <= kConstantTol, fmt::format("L = {:.15g}", L));

  const SolveReport r = solve(s);
  c.require(r.converged, "converged");
  c.require(r.bc_residual <= kBcTol, fmt::format("bc_residual = {:.2e}", r.bc_residual));
  c.require(r.ode_residual <= kOdeTol, fmt::format("ode_residual = {:.2e}", r.ode_residual));
  const double du_sup = sup_norm(r.solution.du());
  c.require(du_sup <= 4.0 / 3.0 + kDerivativeSlack, fmt::format("|du| = {:.4g}", du_sup));
  const double gap = sup_u_distance(r.solution, shooting_oracle(s));
  c.require(gap <= kOracleTol, fmt::format("oracle gap = {:.2e}", gap));
  const double secs = elapsed_since(start);
  c.require(secs <= kExampleSeconds, fmt::format("runtime {:.2f} s", secs));
}

void mean_curvature_threshold(Check& c) {
  std::string out;
  const int code = run_check(kProblems / "mean_curvature_dirichlet_long.txt", out);
  c.require(code == cli::kHypothesis, fmt::format("check exit {}", code));
  c.require(out.find("h_l1 = 0.8 >= a/2 = 0.5") != std::string::npos, "reports h_l1 = 0.8 >= a/2 = 0.5");
}

void cubic_example(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  std::string out;
  const int code = run_check(kProblems / "cubic_threepoint.txt", out);
  c.require(code == cli::kOk, fmt::format("check exit {}", code));

  const ProblemSpec s = make(BoundaryClass::ThreePointClassic, "power 4", "exp(v)/2 - 1", 1.0);
  const SignCertificate cert = check_signs(s.phi, s.f, -1.0, 1.0, Expr::parse("-1"), s.T);
  c.require(cert.verdict == Verdict::CheckedOnGrid, fmt::format("verdict {}", to_string(cert.verdict)));
  c.require(cert.L == 1.0, fmt::format("L = {}", cert.L));
  const double r = cert.r.value_or(NAN), rho = cert.rho_min.value_or(NAN);
  c.require(std::abs(r - std::cbrt(3.0)) <= kConstantTol, fmt::format("r = {:.15g}", r));
  c.require(std::abs(rho - 3.0 * std::cbrt(3.0)) <= kConstantTol, fmt::format("rho_min = {:.15g}", rho));

  const DegreeResult d = brouwer_degree(s.f, s.T, rho);
  c.require(d.winding == -1, fmt::format("winding = {}", d.winding));
  const auto oracle = testing::newton_degree([&](double a, double b) { return g_map(s.f, s.T, a, b); }, rho);
  c.require(oracle.all_converged && oracle.nondegenerate && oracle.sign_sum == d.winding,
            fmt::format("Newton sign sum = {} over {} zero(s)", oracle.sign_sum, oracle.zeros.size()));

  const SolveReport rep = solve(s);
  const Grid g = s.grid();
  double gap = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    gap = std::max(gap, std::abs(rep.solution.u()[i] - std::log(2.0) * g.node(i)));
  c.require(rep.converged && gap <= kAnalyticTol, fmt::format("|u - ln2 t| = {:.2e}", gap));
  const double secs = elapsed_since(start);
  c.require(secs <= kExampleSeconds, fmt::format("runtime {:.2f} s", secs));
}

void qphi_suite(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  const Grid g(1.0, kDefaultGridNodes);
  struct Family {
    Homeomorphism phi;
    double sup;
  };
  const Family catalog[] = {{Homeomorphism::identity(), 3.0},
                            {Homeomorphism::power(4), 3.0},
                            {Homeomorphism::mean_curvature(1), 0.45},
                            {Homeomorphism::relativistic(1), 3.0}};
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> shift(-0.04, 0.04);
  for (const Family& fam : catalog) {
    double worst_identity = 0.0, worst_shift = 0.0, worst_mean = 0.0;
    int range_failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Samples h = testing::random_h(rng, g, fam.sup);
      const QphiResult q = q_phi(fam.phi, g, h);
      const auto [lo, hi] = min_max(h);
      if (q.s < lo || q.s > hi) ++range_failures;
      Samples integrand(h.size());
      for (std::size_t i = 0; i < h.size(); ++i) integrand[i] = fam.phi.apply_inverse(h[i] - q.s);
      worst_identity = std::max(worst_identity, std::abs(testing::trapezoid(integrand, g.step())));
      const double cshift = shift(rng);
      Samples moved = h;
      for (double& x : moved) x += cshift;
      worst_shift = std::max(worst_shift, std::abs(q_phi(fam.phi, g, moved).s - q.s - cshift));
      if (fam.phi.family() == HomeoFamily::Identity)
        worst_mean = std::max(worst_mean, std::abs(q.s - testing::trapezoid(h, g.step()) / g.length()));
    }
    c.require(worst_identity <= kQphiRel * g.length() && range_failures == 0 && worst_shift <= kShiftTol &&
                  worst_mean <= kMeanTol,
              fmt::format("{}: |G_h(s)| {:.1e}, shift {:.1e}, range misses {}{}", fam.phi.describe(), worst_identity,
                          worst_shift, range_failures,
                          fam.phi.family() == HomeoFamily::Identity ? fmt::format(", mean {:.1e}", worst_mean) : ""));
  }
  const double secs = elapsed_since(start);
  c.require(secs <= kQphiSeconds, fmt::format("runtime {:.2f} s", secs));
}

void operator_identities(Check& c) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  int dirichlet_bad = 0;
  const Grid gd(0.3, 601);
  const Expr fd = Expr::parse("cos(4*t) - 0.5*u + 0.2*v");
  for (int i = 0; i < 100; ++i) {
    const GridFunction w = dirichlet_M(Homeomorphism::mean_curvature(1), fd, random_input(rng, gd, 0.5), unit(rng));
    if (w.u().front() != 0.0 || w.u().back() != 0.0) ++dirichlet_bad;
  }
  c.require(dirichlet_bad == 0, fmt::format("dirichlet_M endpoints exact in {}/100", 100 - dirichlet_bad));

  double singular_gap = 0.0;
  int singular_speed = 0;
  const Grid gs(1.2, 601);
  const Expr fs_ = Expr::parse("u^3 - 3*cos(2*t) + v");
  const auto rel = Homeomorphism::relativistic(1);
  for (int i = 0; i < 100; ++i) {
    const GridFunction w = threepoint_singular_M(rel, fs_, random_input(rng, gs, 2.0));
    singular_gap = std::max({singular_gap, std::abs(w.u().front() - w.u().back()),
                             std::abs(w.du().back() - w.u().front())});
    if (!(sup_norm(w.du()) < rel.scale())) ++singular_speed;
  }
  c.require(singular_gap <= kOperatorTol && singular_speed == 0,
            fmt::format("singular_M boundary gap {:.1e}, |w'| >= a in {}", singular_gap, singular_speed));

  // Fixed points of M₁ for 100 perturbed cubic problems.
  double worst_mean = 0.0;
  int unsolved = 0;
  for (int i = 0; i < 100; ++i) {
    const double eps = 0.4 * (unit(rng) - 0.5), k = 1.0 + 3.0 * unit(rng), T = 0.5 + unit(rng);
    ProblemSpec s = make(BoundaryClass::ThreePointClassic, "power 4", "0", T, 401);
    s.f = Expr::parse(fmt::format("exp(v)/2 - 1 + {:.17g}*sin({:.17g}*t)", eps, k));
    try {
      const SolveReport r = solve(s);
      worst_mean = std::max(worst_mean, std::abs(mean(s.grid(), nemytskii(s.f, r.solution))));
    } catch (const Error&) {
      ++unsolved;
    }
  }
  c.require(unsolved == 0 && worst_mean <= kMeanForcingTol,
            fmt::format("M1 fixed points |mean(N_f)| {:.1e}, unsolved {}", worst_mean, unsolved));
}

void oracle_battery(Check& c) {
  const ProblemSpec battery[] = {
      make(BoundaryClass::DirichletBounded, "mean_curvature 1", "u - 2", 0.1),
      make(BoundaryClass::DirichletBounded, "mean_curvature 2", "sin(t) + 0.1*u", 0.5),
      make(BoundaryClass::ThreePointSingular, "relativistic 1", "u - cos(t)", 1.0),
      make(BoundaryClass::ThreePointSingular, "relativistic 1", "tanh(u) + 0.2*sin(2*t)", 0.8),
      make(BoundaryClass::ThreePointClassic, "identity", "v - 1 + 0.1*sin(t)", 1.0),
      make(BoundaryClass::ThreePointClassic, "power 4", "exp(v)/2 - 1 + 0.2*sin(2*t)", 1.0),
  };
  for (const ProblemSpec& s : battery) {
    const SolveReport r = solve(s);
    const double gap = sup_u_distance(r.solution, shooting_oracle(s));
    ProblemSpec fine = s;
    fine.grid_n = 2 * s.grid_n - 1;
    const double ratio = r.ode_residual / solve(fine).ode_residual;
    c.require(r.converged && gap <= kOracleTol && ratio >= kRefinementRatio,
              fmt::format("{} f={}: gap {:.1e}, refinement x{:.2f}", to_string(s.bc), s.f.source(), gap, ratio));
  }
}

void degree_core(Check& c) {
  int identity_ok = 0;
  for (double rho : {1e-3, 0.1, 1.0, 10.0, 1e3})
    if (winding_number([](double a, double b) { return std::array<double, 2>{a, b}; }, rho).winding == 1) ++identity_ok;
  c.require(identity_ok == 5, fmt::format("identity winding 1 on {}/5 radii", identity_ok));

  bool boundary_zero = false;
  try {
    brouwer_degree(Expr::parse("0"), 1.0, 2.0);
  } catch (const BoundaryZero&) {
    boundary_zero = true;
  }
  c.require(boundary_zero, "f = 0 raises BoundaryZero");

  const Expr f = Expr::parse("exp(v)/2 - 1");
  const double rho = 3.0 * std::cbrt(3.0);
  const int base = brouwer_degree(f, 1.0, rho).winding;
  const int doubled = brouwer_degree(f, 1.0, rho, WindingOptions{512, 20, 1e-9}).winding;
  c.require(base == doubled && base == -1, fmt::format("cubic example winding {} / {} with 256 / 512 samples", base, doubled));
}

void parser_fixtures(Check& c) {
  const auto prec = testing::precedence_cases();
  int exact = 0;
  for (const auto& p : prec) {
    try {
      if (Expr::parse(p.text).eval(testing::kT, testing::kU, testing::kV) == p.expected) ++exact;
    } catch (const Error&) {
    }
  }
  c.require(prec.size() >= 20 && exact == static_cast<int>(prec.size()),
            fmt::format("precedence {}/{} exact", exact, prec.size()));

  const auto bad = testing::malformed_cases();
  int rejected = 0;
  for (const auto& m : bad) {
    try {
      Expr::parse(m.text);
    } catch (const ParseError& e) {
      if (e.position() == m.position) ++rejected;
    }
  }
  c.require(bad.size() >= 10 && rejected == static_cast<int>(bad.size()),
            fmt::format("malformed {}/{} rejected at the expected position", rejected, bad.size()));
}

}  // namespace

int main() {
  criterion(1, "mean-curvature Dirichlet example", mean_curvature_example);
  criterion(2, "mean-curvature threshold at T = 0.2", mean_curvature_threshold);
  criterion(3, "cubic three-point example", cubic_example);
  criterion(4, "Q_phi randomized suite", qphi_suite);
  criterion(5, "operator boundary identities", operator_identities);
  criterion(6, "oracle equivalence battery", oracle_battery);
  criterion(7, "degree core", degree_core);
  criterion(8, "expression parser fixtures", parser_fixtures);
  fmt::print("{} of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
