#ifndef MBQKD_QUBIT_HPP
#define MBQKD_QUBIT_HPP

#include <array>
#include <complex>

#include "mbqkd/stats.hpp"

namespace mbqkd {

using complexd = std::complex<double>;

/// Pure qubit state (a0|0> + a1|1>). Global phase carries no meaning here;
/// all comparisons go through fidelity.
struct QubitState {
  complexd a0{1.0, 0.0};
  complexd a1{0.0, 0.0};

  double norm_sq() const { return std::norm(a0) + std::norm(a1); }
  bool is_normalized(double tol = 1e-12) const;
  QubitState normalized() const;
  QubitState conjugated() const { return {std::conj(a0), std::conj(a1)}; }
};

QubitState ket0();
QubitState ket1();
QubitState ket_plus();
QubitState ket_minus();

complexd inner(const QubitState& a, const QubitState& b);  // <a|b>
double fidelity(const QubitState& a, const QubitState& b);  // |<a|b>|^2

/// The four encoding states of each party, indexed by the protocol input
/// x (Alice) and y (Bob): 0,1 form basis 0 and 2,3 form basis 1. Nothing
/// beyond two-dimensionality and normalization is assumed about them.
struct SourceSpec {
  std::array<QubitState, 4> alice;
  std::array<QubitState, 4> bob;
};

void validate_or_throw(const SourceSpec& sources);

/// Both parties use the textbook BB84 states |0>,|1>,|+>,|->.
SourceSpec ideal_bb84_sources();

/// Both parties reuse their basis-0 states as basis 1 (|phi2>=|phi0>,
/// |phi3>=|phi1>): matched-basis statistics look perfect while the raw key
/// is completely known to the measurement unit.
SourceSpec collapse_sources();

/// Decomposition of a state over a (possibly non-orthogonal) pair of basis
/// states: target = c0*base0 + c1*e^{i theta}*base1, up to global phase,
/// with c0, c1 >= 0.
struct ExpansionCoefficients {
  double c0 = 0.0;
  double c1 = 0.0;
  double theta = 0.0;  // in [0, 2*pi); 0 when either coefficient vanishes
};

/// Probability that the two-qubit state a (x) b projects onto
/// (|00>+|11>)/sqrt(2). Lies in [0, 1/2] for normalized inputs.
double bell_projection_prob(const QubitState& a, const QubitState& b);

/// Solves target = c0*base0 + c1*e^{i theta}*base1 up to global phase.
/// Requires base0, base1 linearly independent (Gram determinant > 1e-12);
/// throws DegenerateBasisError otherwise.
ExpansionCoefficients expansion_coefficients(const QubitState& target,
                                             const QubitState& base0,
                                             const QubitState& base1);

/// Applies the reconstruction c0*base0 + c1*e^{i theta}*base1 (not
/// renormalized; exact reconstructions are already unit norm).
QubitState reconstruct(const ExpansionCoefficients& coeffs, const QubitState& base0,
                       const QubitState& base1);

/// Lossless honest-measurement table: p(1|x,y) is the Bell projection
/// probability of (alice[x], bob[y]); all sixteen entries filled.
ConditionalStats ideal_stats(const SourceSpec& sources);

}  // namespace mbqkd

#endif
