#ifndef MBQKD_ATTACK_HPP
#define MBQKD_ATTACK_HPP

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mbqkd/qubit.hpp"
#include "mbqkd/security.hpp"
#include "mbqkd/stats.hpp"

namespace mbqkd {

/// An explicit collective attack: for every input pair (x,y) the
/// measurement unit's unitary sends |phi_x>|phi'_y>|e>|0>_M to
/// sqrt(p(0|x,y))|Gamma_xy0>|0>_M + sqrt(p(1|x,y))|Gamma_xy1>|1>_M.
/// gamma holds the components of |Gamma_xyz> over an orthonormal basis of
/// Eve's space (dimension eve_dim). Instances are built constructively from
/// unitaries so that a consistent attack always exists; gamma tables are
/// never sampled directly.
struct AttackInstance {
  int eve_dim = 4;
  std::vector<complexd> gamma;  // [x][y][z][n], flattened
  ConditionalStats p_table;     // all sixteen entries
  SourceSpec sources;
  std::string kind;             // "honest" | "intercept-resend" | "random"
  std::uint64_t seed = 0;       // meaningful for kind == "random"

  complexd gamma_at(int x, int y, int z, int n) const;
  void set_gamma(int x, int y, int z, int n, complexd value);
};

/// Checks gamma normalization (for entries with p > 0) and table sanity.
std::vector<std::string> validate(const AttackInstance& attack);

/// The measurement unit performs the ideal Bell projection and reports it
/// truthfully. Induced table equals ideal_stats(sources) exactly.
AttackInstance honest_attack(const SourceSpec& sources);

/// Eve measures both photons in the computational basis and announces 1
/// when the outcomes agree. Matched-basis statistics of ideal senders look
/// perfect, but the distilled state carries maximal phase noise.
AttackInstance intercept_resend_attack(const SourceSpec& sources);

/// A Haar-random unitary on C (x) D (x) ancilla (x) message, applied to each
/// input pair. ancilla_dim is the ancilla dimension; Eve's outcome space has
/// dimension 4*ancilla_dim. Deterministic for a fixed seed.
AttackInstance random_attack(std::uint64_t seed, const SourceSpec& sources,
                             int ancilla_dim);

/// Errors of the state the attack actually leaves with Alice and Bob.
struct PhaseErrorReport {
  double e_p_actual = 0.0;
  double e_b_actual = 0.0;
  double bound = std::numeric_limits<double>::quiet_NaN();  // set by the audit
  bool sound = false;
};

/// Builds the basis-0 post-announcement density matrix from the attack and
/// evaluates the bit error rate plus the phase error rate minimized over
/// both distillation phase parameters (360-point grids refined by
/// golden-section search). Throws NoClicksError when no basis-0 pair ever
/// triggers an announcement.
PhaseErrorReport actual_errors(const AttackInstance& attack);

/// The inner inequality the deviation bound rests on, evaluated with the
/// attack's true expansion coefficients: returns (lhs, rhs) with lhs <= rhs
/// for every physical attack.
std::pair<double, double> interior_bound_terms(const AttackInstance& attack);

struct AuditFailure {
  std::uint64_t trial = 0;
  std::string reason;
  std::string artifact_json;  // full instance, for replay
};

struct AuditReport {
  std::uint64_t trials = 0;
  std::uint64_t passes = 0;
  std::uint64_t failures = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // min(bound - e_p)
  std::vector<AuditFailure> failure_artifacts;
};

/// Adversarial soundness check of the full pipeline: per trial, sample
/// sources (random qubit quadruples mixed with the ideal and collapsed
/// corner cases), sample an attack (honest, intercept-resend or random),
/// run the deviation maximization on the induced table, evaluate the true
/// phase error, and require e_p_actual <= min(epsilon + e_b, 1/2) + 1e-6.
/// Sources are resampled when their true expansion coefficients would fall
/// outside the optimizer's search box, which would test box sizing rather
/// than the bound itself.
AuditReport soundness_audit(std::uint64_t trials, std::uint64_t seed,
                            const OptimizerConfig& cfg = {}, int ancilla_dim_max = 2);

/// Tolerance used by the audit's soundness comparison.
inline constexpr double kAuditTolerance = 1e-6;

/// JSON round-trip for attack instances (replay artifacts).
std::string attack_to_json(const AttackInstance& attack);
AttackInstance attack_from_json(const std::string& text);

/// Re-checks one serialized instance; returns the filled report.
PhaseErrorReport replay_attack(const AttackInstance& attack,
                               const OptimizerConfig& cfg = {});

}  // namespace mbqkd

#endif
