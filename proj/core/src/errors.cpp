#include "phibvp/errors.hpp"

#include <fmt/format.h>

#include <utility>

namespace phibvp {

DomainViolation::DomainViolation(double value, double lo, double hi)
    : Error(fmt::format("argument {:.17g} outside the admissible interval ({:.17g}, {:.17g})", value, lo,
                        hi)),
      value_(value),
      lo_(lo),
      hi_(hi) {}

EvalDomain::EvalDomain(const std::string& what, long node)
    : Error(node < 0 ? what : fmt::format("{} (grid node {})", what, node)), node_(node) {}

ParseError::ParseError(const std::string& what, std::size_t position)
    : Error(what), position_(position) {}

SyntaxError::SyntaxError(std::size_t position, std::string expected)
    : ParseError(fmt::format("syntax error at position {}: expected {}", position, expected), position),
      expected_(std::move(expected)) {}

UnknownIdentifier::UnknownIdentifier(std::size_t position, std::string name)
    : ParseError(fmt::format("unknown identifier '{}' at position {}", name, position), position),
      name_(std::move(name)) {}

PreconditionBoundedDomain::PreconditionBoundedDomain(double sup_norm, double half_a)
    : Error(fmt::format("Q_phi needs ||h||_inf < a/2 for a bounded phi: ||h||_inf = {:g} >= a/2 = {:g}",
                        sup_norm, half_a)),
      sup_norm_(sup_norm),
      half_a_(half_a) {}

NoSignChange::NoSignChange(double g_lo, double g_hi)
    : Error(fmt::format("G_h has no sign change on [h_m, h_M]: G(h_m) = {:.17g}, G(h_M) = {:.17g}", g_lo,
                        g_hi)) {}

OmegaViolation::OmegaViolation(double norm, double half_a, double lambda)
    : Error(fmt::format("iterate left the operator domain at lambda = {:g}: ||lambda H(N_f u)||_inf = {:.17g}, "
                        "a/2 = {:g}",
                        lambda, norm, half_a)),
      norm_(norm),
      half_a_(half_a),
      lambda_(lambda) {}

BoundaryZero::BoundaryZero(double min_norm, double threshold)
    : Error(fmt::format("G has a zero on the boundary circle: min |G| = {:.6g} <= {:.6g}", min_norm, threshold)),
      min_norm_(min_norm) {}

InconsistentDerivative::InconsistentDerivative(double x, double supplied, double estimated)
    : Error(fmt::format("dn disagrees with a finite difference of n at x = {:g}: dn = {:.12g}, estimate = {:.12g}",
                        x, supplied, estimated)) {}

}  // namespace phibvp
