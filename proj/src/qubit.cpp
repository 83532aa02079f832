#include "mbqkd/qubit.hpp"

#include <cmath>

#include "mbqkd/errors.hpp"

namespace mbqkd {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
}  // namespace

bool QubitState::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

QubitState QubitState::normalized() const {
  const double n = std::sqrt(norm_sq());
  if (n == 0.0) throw ValidationError("cannot normalize the zero vector");
  return {a0 / n, a1 / n};
}

QubitState ket0() { return {1.0, 0.0}; }
QubitState ket1() { return {0.0, 1.0}; }
QubitState ket_plus() { return {kInvSqrt2, kInvSqrt2}; }
QubitState ket_minus() { return {kInvSqrt2, -kInvSqrt2}; }

complexd inner(const QubitState& a, const QubitState& b) {
  return std::conj(a.a0) * b.a0 + std::conj(a.a1) * b.a1;
}

double fidelity(const QubitState& a, const QubitState& b) {
  return std::norm(inner(a, b));
}

void validate_or_throw(const SourceSpec& sources) {
  for (int i = 0; i < 4; ++i) {
    if (!sources.alice[i].is_normalized())
      throw ValidationError("alice state " + std::to_string(i) + " is not normalized");
    if (!sources.bob[i].is_normalized())
      throw ValidationError("bob state " + std::to_string(i) + " is not normalized");
  }
}

SourceSpec ideal_bb84_sources() {
  return {{ket0(), ket1(), ket_plus(), ket_minus()},
          {ket0(), ket1(), ket_plus(), ket_minus()}};
}

SourceSpec collapse_sources() {
  return {{ket0(), ket1(), ket0(), ket1()}, {ket0(), ket1(), ket0(), ket1()}};
}

double bell_projection_prob(const QubitState& a, const QubitState& b) {
  if (!a.is_normalized() || !b.is_normalized())
    throw ValidationError("bell_projection_prob requires normalized states");
  // <phi+|(a x b)> = (a0*b0 + a1*b1)/sqrt(2)
  const complexd amp = a.a0 * b.a0 + a.a1 * b.a1;
  return 0.5 * std::norm(amp);
}

ExpansionCoefficients expansion_coefficients(const QubitState& target,
                                             const QubitState& base0,
                                             const QubitState& base1) {
  if (!target.is_normalized() || !base0.is_normalized() || !base1.is_normalized())
    throw ValidationError("expansion_coefficients requires normalized states");

  const complexd g01 = inner(base0, base1);
  const double gram_det = 1.0 - std::norm(g01);
  if (gram_det <= 1e-12)
    throw DegenerateBasisError("expansion bases are (numerically) parallel");

  // Solve the 2x2 Gram system for target = alpha*base0 + beta*base1.
  const complexd v0 = inner(base0, target);
  const complexd v1 = inner(base1, target);
  const complexd alpha = (v0 - g01 * v1) / gram_det;
  const complexd beta = (v1 - std::conj(g01) * v0) / gram_det;

  ExpansionCoefficients out;
  out.c0 = std::abs(alpha);
  out.c1 = std::abs(beta);
  if (out.c0 == 0.0 || out.c1 == 0.0) {
    out.theta = 0.0;
    return out;
  }
  // Pull the global phase into alpha so that its coefficient is real >= 0.
  double theta = std::arg(beta) - std::arg(alpha);
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  out.theta = theta;
  return out;
}

QubitState reconstruct(const ExpansionCoefficients& coeffs, const QubitState& base0,
                       const QubitState& base1) {
  const complexd phase = std::polar(coeffs.c1, coeffs.theta);
  return {coeffs.c0 * base0.a0 + phase * base1.a0,
          coeffs.c0 * base0.a1 + phase * base1.a1};
}

ConditionalStats ideal_stats(const SourceSpec& sources) {
  validate_or_throw(sources);
  ConditionalStats out;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      out.set(x, y, bell_projection_prob(sources.alice[x], sources.bob[y]));
  return out;
}

}  // namespace mbqkd
