#include "mbqkd/channel.hpp"

#include <cmath>

#include "mbqkd/errors.hpp"

namespace mbqkd {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
double deg_to_rad(double deg) { return deg * kPi / 180.0; }
}  // namespace

void validate_or_throw(const MdiChannelParams& params) {
  if (!(params.eta >= 0.0 && params.eta <= 1.0))
    throw ValidationError("eta must lie in [0,1]");
  if (!(params.d >= 0.0 && params.d < 1.0))
    throw ValidationError("dark-count probability must lie in [0,1)");
}

void validate_or_throw(const Bb84ChannelParams& params) {
  if (!(params.eta >= 0.0 && params.eta <= 1.0))
    throw ValidationError("eta must lie in [0,1]");
  if (!(params.p_d >= 0.0 && params.p_d < 1.0))
    throw ValidationError("dark-count probability must lie in [0,1)");
  if (!std::isfinite(params.a_deg) || !std::isfinite(params.b_deg) ||
      !std::isfinite(params.c_deg))
    throw ValidationError("misalignment angles must be finite");
}

double loss_db_to_eta(double loss_db) {
  if (!(loss_db >= 0.0)) throw ValidationError("loss must be non-negative dB");
  return std::pow(10.0, -loss_db / 10.0);
}

ConditionalStats mdiqkd_stats(const MdiChannelParams& params) {
  validate_or_throw(params);
  const double eta = params.eta, d = params.d;
  const double q = 1.0 - d;

  // Correct Bell click, one photon lost + one dark count, both lost + two darks.
  const double p_match = eta * eta * q * q / 2.0 +
                         2.0 * eta * (1.0 - eta) * d * q * q +
                         2.0 * (1.0 - eta) * (1.0 - eta) * d * d * q * q;
  // No correlated click available: only dark-count coincidences.
  const double p_err = 2.0 * (1.0 - eta) * (1.0 - eta) * d * d * q * q +
                       2.0 * eta * (1.0 - eta) * d * q * q;
  const double p_cross = (p_match + p_err) / 2.0;

  ConditionalStats out;
  out.set(0, 0, p_match);
  out.set(1, 1, p_match);
  out.set(0, 1, p_err);
  out.set(1, 0, p_err);
  out.set(3, 2, p_err);
  out.set(3, 0, p_cross);
  out.set(3, 1, p_cross);
  out.set(0, 2, p_cross);
  out.set(1, 2, p_cross);
  return out;
}

ConditionalStats bb84_stats(const Bb84ChannelParams& params) {
  validate_or_throw(params);
  const double eta = params.eta, pd = params.p_d;
  const double a = deg_to_rad(params.a_deg);
  const double c = deg_to_rad(params.c_deg);
  const double dark = (1.0 - eta) * pd * (1.0 - pd);
  const double lit = (1.0 - pd) * eta;

  const double sc = std::sin(kPi / 4.0 + c);
  const double cc = std::cos(kPi / 4.0 + c);

  ConditionalStats out;
  out.set(0, 0, lit + dark);
  out.set(1, 1, lit * std::cos(a) * std::cos(a) + dark);
  out.set(0, 1, dark);
  out.set(1, 0, lit * std::sin(a) * std::sin(a) + dark);
  out.set(3, 2, lit * (sc - cc) * (sc - cc) / 2.0 + dark);
  out.set(3, 0, lit * sc * sc + dark);
  out.set(3, 1, lit * cc * cc + dark);
  out.set(0, 2, lit / 2.0 + dark);
  out.set(1, 2, lit * (std::sin(a) + std::cos(a)) * (std::sin(a) + std::cos(a)) / 2.0 + dark);
  return out;
}

SourceSpec bb84_misaligned_sources(double a_deg, double b_deg, double c_deg) {
  const double a = deg_to_rad(a_deg);
  const double b = deg_to_rad(b_deg);
  const double c = deg_to_rad(c_deg);
  SourceSpec s;
  s.alice[0] = ket0();
  s.alice[1] = {std::sin(a), std::cos(a)};
  s.alice[2] = {std::cos(kPi / 4.0 + b), std::sin(kPi / 4.0 + b)};
  s.alice[3] = {std::sin(kPi / 4.0 + c), -std::cos(kPi / 4.0 + c)};
  s.bob = {ket0(), ket1(), ket_plus(), ket_minus()};
  return s;
}

ConditionalStats bb84_stats_from_states(const Bb84ChannelParams& params) {
  validate_or_throw(params);
  const SourceSpec s = bb84_misaligned_sources(params.a_deg, params.b_deg, params.c_deg);
  const double eta = params.eta, pd = params.p_d;

  ConditionalStats out;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      // Receiver projector M_y is the ideal BB84 state (real amplitudes,
      // so no conjugation subtlety).
      const double t = fidelity(s.bob[y], s.alice[x]);
      const double p = eta * t * (1.0 - pd) + (1.0 - eta * t) * pd * (1.0 - pd);
      out.set(x, y, p);
    }
  return out;
}

double gain_basis0(const ConditionalStats& stats) {
  validate_or_throw(stats);
  return (stats.p1(0, 0) + stats.p1(0, 1) + stats.p1(1, 0) + stats.p1(1, 1)) / 4.0;
}

}  // namespace mbqkd
