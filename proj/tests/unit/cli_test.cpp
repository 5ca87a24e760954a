#include "phibvp_cli/commands.hpp"
#include "phibvp_cli/problem_file.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace phibvp::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kProblems = PHIBVP_PROBLEMS_DIR;

class ScratchDir {
 public:
  ScratchDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("phibvp-cli-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p;
  }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(int (*cmd)(const fs::path&, const CommandContext&), const fs::path& file, const fs::path& out_dir) {
  std::ostringstream out, err;
  const int code = cmd(file, CommandContext{out_dir, out, err});
  return {code, out.str(), err.str()};
}

std::string value_of(const std::string& text, const std::string& key) {
  const auto pos = text.find("\n" + key + "=");
  if (pos == std::string::npos) return text.rfind(key + "=", 0) == 0 ? text.substr(key.size() + 1, text.find('\n') - key.size() - 1) : "";
  const auto start = pos + key.size() + 2;
  return text.substr(start, text.find('\n', start) - start);
}

TEST(ProblemFile, ParsesKeysCommentsAndQuotes) {
  const ProblemFile pf = ProblemFile::parse(
      "# header comment\n"
      "problem = dirichlet   # trailing comment\n"
      "phi = mean_curvature 1\n"
      "\n"
      "T=0.1\n"
      "f = \"u - 2\"  # comment after a quoted value\n"
      "h = 4\n"
      "grid_n = 201\n"
      "iteration = picard\n",
      "inline");
  EXPECT_EQ(*pf.problem, BoundaryClass::DirichletBounded);
  EXPECT_EQ(pf.phi->scale(), 1.0);
  EXPECT_EQ(*pf.T, 0.1);
  ASSERT_TRUE(pf.f.has_value());
  EXPECT_EQ(pf.f->source(), "u - 2");
  EXPECT_EQ(pf.h->eval(0, 0, 0), 4.0);
  EXPECT_EQ(*pf.grid_n, 201u);
  EXPECT_EQ(*pf.iteration, IterationScheme::Picard);
  EXPECT_EQ(pf.lines.at("T"), 5u);
  EXPECT_FALSE(pf.rho.has_value());

  const ProblemSpec spec = pf.to_spec("solve");
  EXPECT_EQ(spec.grid_n, 201u);
  EXPECT_EQ(spec.scheme(), IterationScheme::Picard);
}

TEST(ProblemFile, RejectsMalformedInput) {
  struct Case {
    const char* text;
    std::size_t line;
    std::size_t column;
    const char* fragment;
  };
  const Case cases[] = {
      {"foo = 1\n", 1, 1, "unknown key 'foo'"},
      {"T = 1\nT = 2\n", 2, 1, "duplicate key 'T' (first set on line 1)"},
      {"just text\n", 1, 1, "expected 'key = value'"},
      {"T = abc\n", 1, 5, "expects a number"},
      {"T = 1.5x\n", 1, 5, "expects a number"},
      {"grid_n = -3\n", 1, 10, "non-negative integer"},
      {"f = \"u -\"\n", 1, 9, "key 'f'"},
      {"  f = u + * 2\n", 1, 11, "key 'f'"},
      {"f = \"u - 2\n", 1, 5, "unterminated quote"},
      {"phi = wobbly 2\n", 1, 7, "unknown phi"},
      {"problem = periodic\n", 1, 11, "key 'problem'"},
      {"f =\n", 1, 4, "empty value"},
      {" = 3\n", 1, 2, "missing key"},
  };
  for (const Case& c : cases) {
    try {
      ProblemFile::parse(c.text, "case");
      ADD_FAILURE() << "accepted: " << c.text;
    } catch (const ProblemFileError& e) {
      EXPECT_EQ(e.line(), c.line) << c.text;
      EXPECT_EQ(e.column(), c.column) << c.text << " -> " << e.what();
      EXPECT_NE(std::string(e.what()).find(c.fragment), std::string::npos) << e.what();
    }
  }
}

TEST(ProblemFile, MissingAndInconsistentKeys) {
  const ProblemFile pf = ProblemFile::parse("problem = dirichlet\nphi = power 4\nT = 1\n", "p.txt");
  try {
    pf.to_spec("solve");
    FAIL();
  } catch (const ProblemFileError& e) {
    EXPECT_EQ(std::string(e.what()), "p.txt: 'solve' needs key 'f'");
  }
  const ProblemFile kinds = ProblemFile::parse("problem = dirichlet\nphi = power 4\nT = 1\nf = 0\n", "p.txt");
  try {
    kinds.to_spec("solve");
    FAIL();
  } catch (const ProblemFileError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Cli, SolveMeanCurvatureExample) {
  ScratchDir dir;
  const Outcome r = run(cmd_solve, kProblems / "mean_curvature_dirichlet.txt", dir.path());
  ASSERT_EQ(r.code, kOk) << r.err;
  const std::string csv = slurp(dir.path() / "mean_curvature_dirichlet.solution.csv");
  EXPECT_EQ(csv.rfind("t,u,du,phi_du,residual\n0,0,", 0), 0u);
  const std::string last = csv.substr(csv.rfind('\n', csv.size() - 2) + 1);
  EXPECT_EQ(last.rfind("0.10000000000000001,0,", 0), 0u) << last;
  const std::string report = slurp(dir.path() / "mean_curvature_dirichlet.report.txt");
  EXPECT_EQ(value_of(report, "converged"), "true");
  EXPECT_EQ(value_of(report, "bc_residual"), "0");
  EXPECT_FALSE(value_of(report, "omega_margin").empty());
}

TEST(Cli, SolveCubicExample) {
  ScratchDir dir;
  const Outcome r = run(cmd_solve, kProblems / "cubic_threepoint.txt", dir.path());
  ASSERT_EQ(r.code, kOk) << r.err;
  const std::string report = slurp(dir.path() / "cubic_threepoint.report.txt");
  EXPECT_NEAR(std::stod(value_of(report, "u_T")), std::log(2.0), 1e-8);
  EXPECT_EQ(value_of(report, "scheme"), "newton_picard");
}

TEST(Cli, SolveIsByteDeterministic) {
  ScratchDir a, b;
  for (const char* name : {"mean_curvature_dirichlet", "relativistic_threepoint"}) {
    ASSERT_EQ(run(cmd_solve, kProblems / (std::string(name) + ".txt"), a.path()).code, kOk);
    ASSERT_EQ(run(cmd_solve, kProblems / (std::string(name) + ".txt"), b.path()).code, kOk);
    for (const char* suffix : {".solution.csv", ".report.txt"}) {
      const std::string file = std::string(name) + suffix;
      EXPECT_EQ(slurp(a.path() / file), slurp(b.path() / file)) << file;
    }
  }
}

TEST(Cli, SolveErrorsMapToExitCodes) {
  ScratchDir dir;
  const fs::path bad_expr = dir.write("bad.txt", "problem = dirichlet\nphi = mean_curvature 1\nT = 0.1\nf = \"u -\"\n");
  const Outcome parse = run(cmd_solve, bad_expr, dir.path());
  EXPECT_EQ(parse.code, kInput);
  EXPECT_NE(parse.err.find("bad.txt:4:9"), std::string::npos) << parse.err;

  const fs::path omega = dir.write("omega.txt", "problem = dirichlet\nphi = mean_curvature 1\nT = 1\nf = 5\ngrid_n = 101\n");
  EXPECT_EQ(run(cmd_solve, omega, dir.path()).code, kDomain);

  const fs::path eval = dir.write("eval.txt", "problem = threepoint_classic\nphi = identity\nT = 1\nf = log(u)\n");
  EXPECT_EQ(run(cmd_solve, eval, dir.path()).code, kDomain);

  const fs::path stall = dir.write("stall.txt",
                                   "problem = threepoint_classic\nphi = power 4\nT = 1\nf = \"exp(v)/2 - 1\"\n"
                                   "iteration = picard\ngrid_n = 101\n");
  const Outcome nc = run(cmd_solve, stall, dir.path());
  EXPECT_TRUE(nc.code == kNonConvergence || nc.code == kDomain) << nc.code;
  if (nc.code == kNonConvergence) EXPECT_EQ(value_of(slurp(dir.path() / "stall.report.txt"), "converged"), "false");

  EXPECT_EQ(run(cmd_solve, dir.path() / "missing.txt", dir.path()).code, kIo);
}

TEST(Cli, CheckExamples) {
  ScratchDir dir;
  const Outcome mc = run(cmd_check, kProblems / "mean_curvature_dirichlet.txt", dir.path());
  EXPECT_EQ(mc.code, kOk) << mc.err;
  const std::string cert = slurp(dir.path() / "mean_curvature_dirichlet.certificate.txt");
  EXPECT_EQ(value_of(cert, "L").substr(0, 8), "1.333333");

  const Outcome long_interval = run(cmd_check, kProblems / "mean_curvature_dirichlet_long.txt", dir.path());
  EXPECT_EQ(long_interval.code, kHypothesis);
  EXPECT_NE(long_interval.out.find("h_l1 = 0.8 >= a/2 = 0.5"), std::string::npos) << long_interval.out;

  const Outcome cubic = run(cmd_check, kProblems / "cubic_threepoint.txt", dir.path());
  EXPECT_EQ(cubic.code, kOk) << cubic.err;
  EXPECT_EQ(value_of(slurp(dir.path() / "cubic_threepoint.certificate.txt"), "winding"), "-1");

  EXPECT_EQ(run(cmd_check, kProblems / "relativistic_threepoint.txt", dir.path()).code, kOk);

  const fs::path witness = dir.write("w.txt", "problem = threepoint_classic\nphi = power 4\nT = 1\n"
                                              "f = \"exp(v)/2 - 1\"\nm1 = -1\nm2 = 1\nc = 0\n");
  const Outcome failed = run(cmd_check, witness, dir.path());
  EXPECT_EQ(failed.code, kHypothesis);
  EXPECT_NE(failed.out.find("f(t,x,y) >= c(t) fails at"), std::string::npos) << failed.out;

  const fs::path missing = dir.write("m.txt", "problem = dirichlet\nphi = mean_curvature 1\nT = 0.1\nf = u - 2\n");
  const Outcome incomplete = run(cmd_check, missing, dir.path());
  EXPECT_EQ(incomplete.code, kInput);
  EXPECT_NE(incomplete.err.find("needs key 'h'"), std::string::npos);

  const fs::path bad_dn = dir.write("d.txt", "problem = dirichlet\nphi = mean_curvature 1\nT = 0.1\nf = u - 2\n"
                                             "h = 4\nn = u^2\ndn = u\n");
  EXPECT_EQ(run(cmd_check, bad_dn, dir.path()).code, kInput);
}

TEST(Cli, QphiAndDegree) {
  ScratchDir dir;
  const Outcome sine = run(cmd_qphi, kProblems / "qphi_sine.txt", dir.path());
  ASSERT_EQ(sine.code, kOk) << sine.err;
  EXPECT_LE(std::abs(std::stod(value_of("\n" + sine.out, "s"))), 1e-6);

  const Outcome constant = run(cmd_qphi, dir.write("c.txt", "phi = mean_curvature 1\nT = 1\nh = 0.4\n"), dir.path());
  EXPECT_EQ(value_of("\n" + constant.out, "s"), "0.40000000000000002");

  const Outcome too_big =
      run(cmd_qphi, dir.write("b.txt", "phi = mean_curvature 1\nT = 1\nh = \"sin(2*pi*t)\"\n"), dir.path());
  EXPECT_EQ(too_big.code, kDomain);

  const Outcome degenerate = run(cmd_degree, kProblems / "degree_zero_f.txt", dir.path());
  EXPECT_EQ(degenerate.code, kHypothesis);
  EXPECT_NE(degenerate.err.find("zero on the boundary"), std::string::npos);

  const Outcome cubic = run(cmd_degree, dir.write("g.txt", "f = \"exp(v)/2 - 1\"\nT = 1\nrho = 4.4\n"), dir.path());
  EXPECT_EQ(cubic.code, kOk);
  EXPECT_EQ(value_of("\n" + cubic.out, "winding"), "-1");
}

}  // namespace
}  // namespace phibvp::cli
