#include "phibvp_cli/problem_file.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace phibvp::cli {
namespace {

constexpr std::array<std::string_view, 15> kKeys{"problem", "phi", "T",   "f",   "grid_n",      "h",   "n",        "dn",
                                                 "c",       "m1",  "m2",  "rho", "lambda_step", "tol", "iteration"};

std::string location(const std::string& source, std::size_t line, std::size_t column) {
  if (line == 0) return source;
  if (column == 0) return fmt::format("{}:{}", source, line);
  return fmt::format("{}:{}:{}", source, line, column);
}

bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\r'; }

// Offsets of the first and one-past-last non-blank characters of s[begin, end).
std::pair<std::size_t, std::size_t> trim(std::string_view s, std::size_t begin, std::size_t end) {
  while (begin < end && is_space(s[begin])) ++begin;
  while (end > begin && is_space(s[end - 1])) --end;
  return {begin, end};
}

struct Value {
  std::string_view text;
  std::size_t line;
  std::size_t column;  // 1-based column of text[0]
};

double parse_number(const ProblemFile& pf, std::string_view key, const Value& v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), x);
  if (ec != std::errc() || ptr != v.text.data() + v.text.size())
    throw ProblemFileError(pf.source, v.line, v.column, fmt::format("key '{}' expects a number, got '{}'", key, v.text));
  return x;
}

std::size_t parse_count(const ProblemFile& pf, std::string_view key, const Value& v) {
  std::size_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), x);
  if (ec != std::errc() || ptr != v.text.data() + v.text.size())
    throw ProblemFileError(pf.source, v.line, v.column,
                           fmt::format("key '{}' expects a non-negative integer, got '{}'", key, v.text));
  return x;
}

Expr parse_expr(const ProblemFile& pf, std::string_view key, const Value& v) {
  try {
    return Expr::parse(v.text);
  } catch (const ParseError& e) {
    throw ProblemFileError(pf.source, v.line, v.column + e.position(), fmt::format("key '{}': {}", key, e.what()));
  }
}

template <class F>
auto parse_named(const ProblemFile& pf, std::string_view key, const Value& v, F&& parse) {
  try {
    return parse(v.text);
  } catch (const std::invalid_argument& e) {
    throw ProblemFileError(pf.source, v.line, v.column, fmt::format("key '{}': {}", key, e.what()));
  }
}

void assign(ProblemFile& pf, std::string_view key, const Value& v) {
  if (key == "problem") pf.problem = parse_named(pf, key, v, [](std::string_view s) { return parse_boundary_class(s); });
  else if (key == "phi") pf.phi = parse_named(pf, key, v, [](std::string_view s) { return Homeomorphism::parse(s); });
  else if (key == "T") pf.T = parse_number(pf, key, v);
  else if (key == "f") pf.f = parse_expr(pf, key, v);
  else if (key == "grid_n") pf.grid_n = parse_count(pf, key, v);
  else if (key == "h") pf.h = parse_expr(pf, key, v);
  else if (key == "n") pf.n = parse_expr(pf, key, v);
  else if (key == "dn") pf.dn = parse_expr(pf, key, v);
  else if (key == "c") pf.c = parse_expr(pf, key, v);
  else if (key == "m1") pf.m1 = parse_number(pf, key, v);
  else if (key == "m2") pf.m2 = parse_number(pf, key, v);
  else if (key == "rho") pf.rho = parse_number(pf, key, v);
  else if (key == "lambda_step") pf.lambda_step = parse_number(pf, key, v);
  else if (key == "tol") pf.tol = parse_number(pf, key, v);
  else if (key == "iteration")
    pf.iteration = parse_named(pf, key, v, [](std::string_view s) { return parse_iteration_scheme(s); });
}

}  // namespace

ProblemFileError::ProblemFileError(const std::string& source, std::size_t line, std::size_t column,
                                   const std::string& message)
    : Error(fmt::format("{}: {}", location(source, line, column), message)), line_(line), column_(column) {}

ProblemFile ProblemFile::parse(std::string_view text, std::string source) {
  ProblemFile pf;
  pf.source = std::move(source);

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t stop = text.find('\n', start);
    if (stop == std::string_view::npos) stop = text.size();
    const std::string_view line = text.substr(start, stop - start);
    ++line_no;
    start = stop + 1;

    // '#' starts a comment unless it sits inside a quoted value.
    std::size_t end = line.size();
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        end = i;
        break;
      }
    }
    const auto [b, e] = trim(line, 0, end);
    if (b == e) continue;

    const std::size_t eq = line.find('=', b);
    if (eq == std::string_view::npos || eq >= e)
      throw ProblemFileError(pf.source, line_no, b + 1, "expected 'key = value'");
    const auto [kb, ke] = trim(line, b, eq);
    const std::string_view key = line.substr(kb, ke - kb);
    if (key.empty()) throw ProblemFileError(pf.source, line_no, b + 1, "missing key before '='");
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw ProblemFileError(pf.source, line_no, kb + 1, fmt::format("unknown key '{}'", key));
    if (const auto it = pf.lines.find(key); it != pf.lines.end())
      throw ProblemFileError(pf.source, line_no, kb + 1,
                             fmt::format("duplicate key '{}' (first set on line {})", key, it->second));

    auto [vb, ve] = trim(line, eq + 1, e);
    if (vb < ve && line[vb] == '"') {
      if (ve - vb < 2 || line[ve - 1] != '"')
        throw ProblemFileError(pf.source, line_no, vb + 1, fmt::format("unterminated quote in value of '{}'", key));
      ++vb;
      --ve;
    }
    if (vb == ve) throw ProblemFileError(pf.source, line_no, eq + 2, fmt::format("empty value for key '{}'", key));

    assign(pf, key, Value{line.substr(vb, ve - vb), line_no, vb + 1});
    pf.lines.emplace(std::string(key), line_no);
  }
  return pf;
}

ProblemFile ProblemFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open problem file '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("cannot read problem file '{}'", path.string()));
  return parse(buffer.str(), path.string());
}

void ProblemFile::missing(std::string_view key, std::string_view command) const {
  throw ProblemFileError(source, 0, 0, fmt::format("'{}' needs key '{}'", command, key));
}

ProblemSpec ProblemFile::to_spec(std::string_view command) const {
  ProblemSpec spec{need(problem, "problem", command), need(phi, "phi", command), need(f, "f", command),
                   need(T, "T", command), grid_n.value_or(kDefaultGridNodes)};
  if (lambda_step) spec.options.lambda_step = *lambda_step;
  if (tol) spec.options.tol_fp = *tol;
  spec.options.scheme = iteration;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    // Point at the key the validation message opens with; a kind mismatch is blamed on phi.
    const std::string_view what = e.what();
    std::size_t line = 0;
    for (std::string_view key : {"phi", "T", "grid_n", "tol", "lambda_step"}) {
      const bool blamed = key == "phi" ? what.starts_with("problem") : what.starts_with(fmt::format("{} ", key));
      if (const auto it = lines.find(key); blamed && it != lines.end()) line = it->second;
    }
    throw ProblemFileError(source, line, 0, e.what());
  }
  return spec;
}

}  // namespace phibvp::cli
