#include "phibvp_cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"phibvp: fixed-point solver and hypothesis checks for phi-Laplacian boundary value problems"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::string file;
  app.add_option("--out-dir", out_dir, "Directory for CSV and report files")->capture_default_str();

  using Command = int (*)(const std::filesystem::path&, const phibvp::cli::CommandContext&);
  struct Entry {
    const char* name;
    const char* help;
    Command run;
  };
  const Entry entries[] = {
      {"solve", "Solve the boundary value problem; writes <stem>.solution.csv and <stem>.report.txt",
       phibvp::cli::cmd_solve},
      {"check", "Check the existence hypotheses on a sample grid; writes <stem>.certificate.txt",
       phibvp::cli::cmd_check},
      {"qphi", "Evaluate Q_phi(h) for h given as an expression of t", phibvp::cli::cmd_qphi},
      {"degree", "Winding number of the reduced map G along the circle of radius rho", phibvp::cli::cmd_degree},
  };
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("file", file, "Problem file")->required();
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : phibvp::cli::kInput;
  }

  const phibvp::cli::CommandContext ctx{out_dir, std::cout, std::cerr};
  for (const Entry& e : entries)
    if (app.got_subcommand(e.name)) return e.run(file, ctx);
  return phibvp::cli::kInput;
}
