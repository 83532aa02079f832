#ifndef MBQKD_SECURITY_HPP
#define MBQKD_SECURITY_HPP

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "mbqkd/stats.hpp"

namespace mbqkd {

/// Search settings for the deviation maximization. The search box is
/// [0, c_max]^4 over the expansion coefficients (C30, C31, C'20, C'21);
/// physical tables pin the feasible region near O(1), and a maximizer that
/// runs into the box edge is flagged rather than silently trusted.
struct OptimizerConfig {
  double c_max = 10.0;
  int coarse_grid = 41;        // grid points per axis, >= 3
  int refine_rounds = 4;
  double refine_shrink = 0.2;  // box width factor per refinement round
  int multistarts = 32;        // local pattern-search polish starts
  double feasibility_tol = 1e-9;
};

void validate_or_throw(const OptimizerConfig& cfg);

struct OptimizerDiagnostics {
  std::vector<double> incumbent_history;  // best objective after each stage
  std::uint64_t feasible_cells = 0;       // coarse cells passing the filter
  std::uint64_t evaluations = 0;
  std::uint64_t polish_starts = 0;
  double max_violation_at_argmax = 0.0;
  double raw_rate_per_sifted_bit = 0.0;   // before clamping at zero
};

/// Result of the deviation maximization.
struct EpsilonResult {
  double epsilon = 0.0;                  // clamped to [0,1]
  std::array<double, 4> argmax{};        // (C30, C31, C'20, C'21)
  bool boundary_hit = false;             // argmax within one coarse cell of c_max
  OptimizerDiagnostics diagnostics;
};

/// Full security evaluation of one statistics table.
struct SecurityResult {
  double e_b = 0.0;
  double epsilon = 0.0;
  double e_p = 0.0;  // min(epsilon + e_b, 1/2)
  double gain = 0.0;
  double rate_per_sifted_bit = 0.0;  // 1 - H(e_b) - H(e_p), clamped at 0
  double rate_per_pulse = 0.0;       // gain * rate_per_sifted_bit
  std::array<double, 4> argmax{};
  bool boundary_hit = false;
  OptimizerDiagnostics diagnostics;
};

/// Shannon binary entropy, base 2; H(0) = H(1) = 0. Input outside [0,1]
/// is an error.
double binary_entropy(double x);

/// e_b = (p(1|0,1)+p(1|1,0)) / (p(1|0,0)+p(1|1,1)+p(1|0,1)+p(1|1,0)).
/// Throws NoClicksError when the denominator vanishes.
double bit_error_rate(const ConditionalStats& stats);

/// The four-case objective whose feasible maximum is the deviation. Case
/// selection tests the products C30*C'20 and C31*C'21 against exact zero;
/// products below 1e-12 are additionally evaluated under the adjacent
/// case and the larger value is kept (the function is discontinuous at the
/// case boundaries, and rounding up is the safe direction for a maximum).
double f_objective(double c30, double c31, double cp20, double cp21,
                   const ConditionalStats& stats);

/// Signed slack pair (lhs, rhs) for each of the four two-sided constraints;
/// the point is feasible iff all eight slacks are >= -feasibility_tol.
std::array<std::pair<double, double>, 4> constraints_residuals(
    double c30, double c31, double cp20, double cp21, const ConditionalStats& stats);

/// Constrained maximization of f_objective over [0, c_max]^4: coarse grid
/// scan with feasibility filtering, grid refinement around the incumbent,
/// and multistart pattern-search polish. Throws InfeasibleError when the
/// feasible region is empty within the box.
EpsilonResult epsilon_max(const ConditionalStats& stats, const OptimizerConfig& cfg = {});

/// The reduced maximization valid for tables satisfying the symmetric
/// identities (see is_symmetric_case); throws ValidationError otherwise.
EpsilonResult epsilon_max_symmetric(const ConditionalStats& stats,
                                    const OptimizerConfig& cfg = {},
                                    double symmetry_tol = 1e-9);

/// e_p bound: min(e_b + epsilon, 1/2).
double phase_error_bound(double e_b, double epsilon);

enum class EpsilonMethod {
  full,                     // always the general maximization
  symmetric_if_applicable,  // reduced form when the table qualifies
};

/// Full pipeline: bit error rate, deviation, phase-error bound, entropies,
/// gain, and both rate normalizations.
SecurityResult key_rate(const ConditionalStats& stats, const OptimizerConfig& cfg = {},
                        EpsilonMethod method = EpsilonMethod::full,
                        double symmetry_tol = 1e-9);

}  // namespace mbqkd

#endif
