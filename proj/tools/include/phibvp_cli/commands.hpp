#pragma once

#include <filesystem>
#include <iosfwd>

namespace phibvp::cli {

enum ExitCode : int {
  kOk = 0,
  kIo = 1,
  kHypothesis = 2,  ///< a sampled hypothesis failed, or the degree is undefined or zero
  kNonConvergence = 3,
  kInput = 4,   ///< problem file, expression or parameter validation
  kDomain = 5,  ///< φ, φ⁻¹, Ω or expression evaluation left its domain
};

struct CommandContext {
  std::filesystem::path out_dir = ".";
  std::ostream& out;
  std::ostream& err;
};

/// Writes <stem>.solution.csv and <stem>.report.txt.
int cmd_solve(const std::filesystem::path& file, const CommandContext& ctx);
/// Writes <stem>.certificate.txt.
int cmd_check(const std::filesystem::path& file, const CommandContext& ctx);
int cmd_qphi(const std::filesystem::path& file, const CommandContext& ctx);
int cmd_degree(const std::filesystem::path& file, const CommandContext& ctx);

}  // namespace phibvp::cli
