#include "phibvp_cli/commands.hpp"

#include "phibvp/certificates.hpp"
#include "phibvp/operators.hpp"
#include "phibvp/solver.hpp"
#include "phibvp_cli/problem_file.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <string>

namespace phibvp::cli {
namespace fs = std::filesystem;
namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError(fmt::format("cannot create directory '{}': {}", path.parent_path().string(), ec.message()));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
}

fs::path output_path(const fs::path& file, const CommandContext& ctx, std::string_view suffix) {
  return ctx.out_dir / (file.stem().string() + std::string(suffix));
}

// Every failure class maps to exactly one exit code.
int run(std::string_view command, const CommandContext& ctx, const std::function<int()>& body) {
  auto fail = [&](int code, const std::exception& e) {
    fmt::print(ctx.err, "phibvp {}: error: {}\n", command, e.what());
    return code;
  };
  try {
    return body();
  } catch (const IoError& e) {
    return fail(kIo, e);
  } catch (const ProblemFileError& e) {
    return fail(kInput, e);
  } catch (const ParseError& e) {
    return fail(kInput, e);
  } catch (const InconsistentDerivative& e) {
    return fail(kInput, e);
  } catch (const NonConvergence& e) {
    return fail(kNonConvergence, e);
  } catch (const BoundaryZero& e) {
    return fail(kHypothesis, e);
  } catch (const DomainViolation& e) {
    return fail(kDomain, e);
  } catch (const EvalDomain& e) {
    return fail(kDomain, e);
  } catch (const OmegaViolation& e) {
    return fail(kDomain, e);
  } catch (const PreconditionBoundedDomain& e) {
    return fail(kDomain, e);
  } catch (const NoSignChange& e) {
    return fail(kDomain, e);
  } catch (const std::invalid_argument& e) {
    return fail(kInput, e);
  } catch (const std::exception& e) {
    return fail(kIo, e);
  }
}

template <class F>
double or_nan(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::string solution_csv(const ProblemSpec& spec, const GridFunction& u) {
  Samples residual;
  try {
    residual = ode_residual_profile(spec, u);
  } catch (const Error&) {
    residual.assign(u.size(), std::numeric_limits<double>::quiet_NaN());
  }
  std::string out = "t,u,du,phi_du,residual\n";
  const Grid& grid = u.grid();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double phi_du = or_nan([&] { return spec.phi.apply(u.du()[i]); });
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", grid.node(i), u.u()[i], u.du()[i], phi_du,
                       residual[i]);
  }
  return out;
}

std::string solve_report(const ProblemSpec& spec, const SolveReport& r) {
  const GridFunction& u = r.solution;
  std::string out;
  out += fmt::format("problem={}\nphi={}\nf={}\nT={:.17g}\ngrid_n={}\n", to_string(spec.bc), spec.phi.describe(),
                     spec.f.source(), spec.T, spec.grid_n);
  out += fmt::format("scheme={}\nconverged={}\n", to_string(r.scheme), r.converged ? "true" : "false");
  out += fmt::format("fp_residual={:.17g}\node_residual={:.17g}\nbc_residual={:.17g}\nconsistency_defect={:.17g}\n",
                     r.fp_residual, r.ode_residual, r.bc_residual, r.consistency_defect);
  if (r.omega_margin) out += fmt::format("omega_margin={:.17g}\n", *r.omega_margin);
  std::string path;
  for (const LambdaStage& s : r.lambda_path) path += fmt::format("{}{:.17g}:{}", path.empty() ? "" : ",", s.lambda, s.iterations);
  out += fmt::format("lambda_stages={}\nlambda_path={}\n", r.lambda_path.size(), path);
  const Norms nrm = norms(u);
  out += fmt::format("u_sup={:.17g}\ndu_sup={:.17g}\nc1_norm={:.17g}\n", nrm.sup, sup_norm(u.du()), nrm.c1);
  out += fmt::format("u_0={:.17g}\nu_T={:.17g}\ndu_0={:.17g}\ndu_T={:.17g}\n", u.u().front(), u.u().back(),
                     u.du().front(), u.du().back());
  return out;
}

}  // namespace

int cmd_solve(const fs::path& file, const CommandContext& ctx) {
  return run("solve", ctx, [&] {
    const ProblemFile pf = ProblemFile::load(file);
    const ProblemSpec spec = pf.to_spec("solve");
    const fs::path csv = output_path(file, ctx, ".solution.csv");
    const fs::path report_path = output_path(file, ctx, ".report.txt");
    try {
      const SolveReport r = solve(spec);
      write_text(csv, solution_csv(spec, r.solution));
      write_text(report_path, solve_report(spec, r));
      fmt::print(ctx.out, "{}: converged ({} stages) fp_residual={:.3e} ode_residual={:.3e} bc_residual={:.3e} -> {}\n",
                 file.filename().string(), r.lambda_path.size(), r.fp_residual, r.ode_residual, r.bc_residual,
                 csv.string());
      return int{kOk};
    } catch (const NonConvergence& e) {
      // Keep the best iterate on disk for inspection.
      write_text(csv, solution_csv(spec, e.report().solution));
      write_text(report_path, solve_report(spec, e.report()));
      throw;
    }
  });
}

int cmd_check(const fs::path& file, const CommandContext& ctx) {
  return run("check", ctx, [&] {
    const ProblemFile pf = ProblemFile::load(file);
    const ProblemSpec spec = pf.to_spec("check");
    const fs::path out_path = output_path(file, ctx, ".certificate.txt");

    switch (spec.bc) {
      case BoundaryClass::DirichletBounded: {
        // Fetched one by one so a missing key is always reported in file order.
        const Expr& h = pf.need(pf.h, "h", "check");
        const Expr& n = pf.need(pf.n, "n", "check");
        const Expr& dn = pf.need(pf.dn, "dn", "check");
        const GrowthCertificate cert = check_growth(spec.phi, spec.f, h, n, dn, spec.T, std::nullopt, spec.grid_n);
        write_text(out_path, to_key_value(cert));
        if (cert.verdict != Verdict::CheckedOnGrid) {
          fmt::print(ctx.out, "{}: {}: {}\n", file.filename().string(), to_string(cert.verdict), cert.detail);
          return int{kHypothesis};
        }
        fmt::print(ctx.out, "{}: checked_on_grid h_l1={:.17g} L={:.17g} c1_bound={:.17g}\n", file.filename().string(),
                   cert.h_l1, *cert.L, *cert.c1_bound);
        return int{kOk};
      }
      case BoundaryClass::ThreePointClassic: {
        const double m1 = pf.need(pf.m1, "m1", "check");
        const double m2 = pf.need(pf.m2, "m2", "check");
        const Expr& c = pf.need(pf.c, "c", "check");
        const SignCertificate cert = check_signs(spec.phi, spec.f, m1, m2, c, spec.T, std::nullopt, spec.grid_n);
        std::string text = to_key_value(cert);
        if (cert.verdict != Verdict::CheckedOnGrid) {
          write_text(out_path, text);
          fmt::print(ctx.out, "{}: {}: {}\n", file.filename().string(), to_string(cert.verdict), cert.detail);
          return int{kHypothesis};
        }
        const double rho = std::max(pf.rho.value_or(0.0), *cert.rho_min);
        try {
          const DegreeResult degree = brouwer_degree(spec.f, spec.T, rho);
          text += to_key_value(degree);
          write_text(out_path, text);
          fmt::print(ctx.out, "{}: checked_on_grid L={:.17g} r={:.17g} rho_min={:.17g} winding={}\n",
                     file.filename().string(), cert.L, *cert.r, *cert.rho_min, degree.winding);
          if (degree.winding == 0) {
            fmt::print(ctx.out, "{}: degree is zero at rho = {:.17g}\n", file.filename().string(), rho);
            return int{kHypothesis};
          }
          return int{kOk};
        } catch (const BoundaryZero& e) {
          text += fmt::format("rho={:.17g}\nwinding=undefined\ndetail={}\n", rho, e.what());
          write_text(out_path, text);
          throw;
        }
      }
      case BoundaryClass::ThreePointSingular: {
        // No sampled hypotheses: solutions exist for every continuous f, with |u'| < a.
        const double a = spec.phi.scale();
        write_text(out_path, fmt::format("certificate=singular\nverdict=no_hypotheses\na={:.17g}\ndu_bound={:.17g}\n"
                                         "c1_bound={:.17g}\n",
                                         a, a, 2.0 * a + a * spec.T));
        fmt::print(ctx.out, "{}: no hypotheses to check; |u'| < {:.17g}, c1 bound {:.17g}\n", file.filename().string(),
                   a, 2.0 * a + a * spec.T);
        return int{kOk};
      }
    }
    return int{kIo};
  });
}

int cmd_qphi(const fs::path& file, const CommandContext& ctx) {
  return run("qphi", ctx, [&] {
    const ProblemFile pf = ProblemFile::load(file);
    const Homeomorphism& phi = pf.need(pf.phi, "phi", "qphi");
    const double T = pf.need(pf.T, "T", "qphi");
    const Expr& h = pf.need(pf.h, "h", "qphi");
    const Grid grid(T, pf.grid_n.value_or(kDefaultGridNodes));
    const Samples hs = grid.sample([&](double t) { return h.eval(t, 0.0, 0.0); });
    const QphiResult q = q_phi(phi, grid, hs);
    fmt::print(ctx.out, "s={:.17g}\nresidual={:.17g}\niterations={}\n", q.s, q.residual, q.iterations);
    return int{kOk};
  });
}

int cmd_degree(const fs::path& file, const CommandContext& ctx) {
  return run("degree", ctx, [&] {
    const ProblemFile pf = ProblemFile::load(file);
    const Expr& f = pf.need(pf.f, "f", "degree");
    const double T = pf.need(pf.T, "T", "degree");
    const double rho = pf.need(pf.rho, "rho", "degree");
    const DegreeResult degree = brouwer_degree(f, T, rho);
    fmt::print(ctx.out, "{}", to_key_value(degree));
    return int{kOk};
  });
}

}  // namespace phibvp::cli
