#include "mbqkd/security.hpp"

#include <algorithm>
#include <cmath>

#include "mbqkd/channel.hpp"
#include "mbqkd/errors.hpp"
#include "search.hpp"

namespace mbqkd {

namespace detail {

ConstraintSet full_constraints(const ConditionalStats& s) {
  ConstraintSet cons;
  cons.rows[0] = ConstraintRow::point(s.p1(3, 0), s.p1(0, 0), s.p1(1, 0));
  cons.rows[1] = ConstraintRow::point(s.p1(3, 1), s.p1(0, 1), s.p1(1, 1));
  cons.rows[2] = ConstraintRow::point(s.p1(0, 2), s.p1(0, 0), s.p1(0, 1));
  cons.rows[3] = ConstraintRow::point(s.p1(1, 2), s.p1(1, 0), s.p1(1, 1));
  return cons;
}

FullObjective full_objective(const ConditionalStats& s) {
  const double den =
      s.p1(0, 0) + s.p1(1, 1) + s.p1(0, 1) + s.p1(1, 0);
  FullObjective obj;
  obj.s32 = std::sqrt(s.p1(3, 2));
  obj.s01 = std::sqrt(s.p1(0, 1));
  obj.s10 = std::sqrt(s.p1(1, 0));
  obj.s00 = std::sqrt(s.p1(0, 0));
  obj.s11 = std::sqrt(s.p1(1, 1));
  obj.inv_den = 1.0 / (2.0 * den);
  obj.one_minus_eb = 1.0 - (s.p1(0, 1) + s.p1(1, 0)) / den;
  return obj;
}

}  // namespace detail

void validate_or_throw(const OptimizerConfig& cfg) {
  if (!(cfg.c_max > 0.0)) throw ValidationError("c_max must be positive");
  if (cfg.coarse_grid < 3) throw ValidationError("coarse_grid must be at least 3");
  if (cfg.refine_rounds < 1) throw ValidationError("refine_rounds must be positive");
  if (!(cfg.refine_shrink > 0.0 && cfg.refine_shrink < 1.0))
    throw ValidationError("refine_shrink must lie in (0,1)");
  if (cfg.multistarts < 1) throw ValidationError("multistarts must be positive");
  if (!(cfg.feasibility_tol > 0.0))
    throw ValidationError("feasibility_tol must be positive");
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw ValidationError("binary_entropy argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -(x * std::log2(x) + (1.0 - x) * std::log2(1.0 - x));
}

double bit_error_rate(const ConditionalStats& stats) {
  const double den =
      stats.p1(0, 0) + stats.p1(1, 1) + stats.p1(0, 1) + stats.p1(1, 0);
  if (den <= 0.0)
    throw NoClicksError("no basis-0 announcements: bit error rate undefined");
  return (stats.p1(0, 1) + stats.p1(1, 0)) / den;
}

double f_objective(double c30, double c31, double cp20, double cp21,
                   const ConditionalStats& stats) {
  validate_or_throw(stats);
  const auto obj = detail::full_objective(stats);
  return obj.eval({c30, c31, cp20, cp21});
}

std::array<std::pair<double, double>, 4> constraints_residuals(
    double c30, double c31, double cp20, double cp21, const ConditionalStats& stats) {
  validate_or_throw(stats);
  const auto cons = detail::full_constraints(stats);
  const detail::Vec4 c{c30, c31, cp20, cp21};
  std::array<std::pair<double, double>, 4> out;
  for (int r = 0; r < 4; ++r) {
    const auto& row = cons.rows[r];
    const double a = r < 2 ? c[0] : c[2];
    const double b = r < 2 ? c[1] : c[3];
    const double mid = row.t_lo - row.u_lo * a * a - row.w_lo * b * b;
    const double bound = 2.0 * row.sqrt_uw_hi * a * b;
    out[r] = {mid + bound, bound - mid};  // lhs slack, rhs slack
  }
  return out;
}

EpsilonResult epsilon_max(const ConditionalStats& stats, const OptimizerConfig& cfg) {
  validate_or_throw(stats);
  bit_error_rate(stats);  // rejects the no-clicks table up front

  const auto obj = detail::full_objective(stats);
  const auto cons = detail::full_constraints(stats);
  auto outcome = detail::BoxSearch(obj, cons, cfg).run();

  EpsilonResult result;
  result.epsilon = std::clamp(outcome.best.f, 0.0, 1.0);
  result.argmax = outcome.best.c;
  result.boundary_hit = outcome.boundary_hit;
  result.diagnostics = std::move(outcome.diagnostics);
  return result;
}

EpsilonResult epsilon_max_symmetric(const ConditionalStats& stats,
                                    const OptimizerConfig& cfg, double symmetry_tol) {
  validate_or_throw(stats);
  if (!is_symmetric_case(stats, symmetry_tol))
    throw ValidationError(
        "table does not satisfy the symmetric identities; use epsilon_max");

  const double e_b = bit_error_rate(stats);
  const double e_bp = stats.p1(3, 2) / (stats.p1(0, 0) + stats.p1(0, 1));

  detail::SymmetricObjective obj;
  obj.s_ebp = std::sqrt(e_bp);
  obj.s_eb = std::sqrt(e_b);
  obj.s_1meb = std::sqrt(1.0 - e_b);
  obj.one_minus_eb = 1.0 - e_b;

  detail::ConstraintSet cons;
  cons.rows[0] = detail::ConstraintRow::point(0.5, 1.0 - e_b, e_b);
  cons.rows[1] = detail::ConstraintRow::point(0.5, e_b, 1.0 - e_b);
  cons.rows[2] = detail::ConstraintRow::point(0.5, 1.0 - e_b, e_b);
  cons.rows[3] = detail::ConstraintRow::point(0.5, e_b, 1.0 - e_b);

  auto outcome = detail::BoxSearch(obj, cons, cfg).run();

  EpsilonResult result;
  result.epsilon = std::clamp(outcome.best.f, 0.0, 1.0);
  result.argmax = outcome.best.c;
  result.boundary_hit = outcome.boundary_hit;
  result.diagnostics = std::move(outcome.diagnostics);
  return result;
}

double phase_error_bound(double e_b, double epsilon) {
  return std::min(e_b + epsilon, 0.5);
}

SecurityResult key_rate(const ConditionalStats& stats, const OptimizerConfig& cfg,
                        EpsilonMethod method, double symmetry_tol) {
  validate_or_throw(stats);

  SecurityResult result;
  result.gain = gain_basis0(stats);
  result.e_b = bit_error_rate(stats);

  EpsilonResult eps;
  if (method == EpsilonMethod::symmetric_if_applicable &&
      is_symmetric_case(stats, symmetry_tol))
    eps = epsilon_max_symmetric(stats, cfg, symmetry_tol);
  else
    eps = epsilon_max(stats, cfg);

  result.epsilon = eps.epsilon;
  result.argmax = eps.argmax;
  result.boundary_hit = eps.boundary_hit;
  result.diagnostics = std::move(eps.diagnostics);

  result.e_p = phase_error_bound(result.e_b, result.epsilon);
  const double raw = 1.0 - binary_entropy(result.e_b) - binary_entropy(result.e_p);
  result.diagnostics.raw_rate_per_sifted_bit = raw;
  result.rate_per_sifted_bit = std::max(0.0, raw);
  result.rate_per_pulse = result.gain * result.rate_per_sifted_bit;
  return result;
}

}  // namespace mbqkd
