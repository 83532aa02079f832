#include "mbqkd/decoy.hpp"

#include <algorithm>
#include <cmath>

#include "mbqkd/errors.hpp"
#include "search.hpp"

namespace mbqkd {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

// Wrong-detector probability for photon-driven basis-0 clicks: Alice's two
// basis-0 states against the ideal projectors, averaged over the bit.
double misalignment_error(const Bb84ChannelParams& ch) {
  const double a = ch.a_deg * kPi / 180.0;
  return std::sin(a) * std::sin(a) / 2.0;
}

}  // namespace

void validate_or_throw(const DecoyParams& params) {
  if (!(params.nu > 0.0 && params.nu < params.mu))
    throw ValidationError("decoy intensities must satisfy 0 < nu < mu");
  if (!(params.n_pulses > 0.0))
    throw ValidationError("pulse count must be positive (or infinite)");
  if (params.k_sigma < 0.0)
    throw ValidationError("sigma multiplier must be non-negative");
}

DecoyObservations simulate_bb84_observations(const Bb84ChannelParams& channel,
                                             const DecoyParams& decoy) {
  validate_or_throw(channel);
  validate_or_throw(decoy);
  const double eta = channel.eta, pd = channel.p_d;
  const double y0 = 2.0 * pd * (1.0 - pd);  // dark click in exactly one detector
  const double e_mis = misalignment_error(channel);

  auto gain = [&](double intensity) {
    const double vac = std::exp(-eta * intensity);
    return (1.0 - pd) * (1.0 - vac) + y0 * vac;
  };
  auto error_gain = [&](double intensity) {
    const double vac = std::exp(-eta * intensity);
    return (1.0 - pd) * (1.0 - vac) * e_mis + 0.5 * y0 * vac;
  };

  DecoyObservations obs;
  obs.q_vac = y0;
  obs.q_nu = gain(decoy.nu);
  obs.q_mu = gain(decoy.mu);
  obs.eq_vac = 0.5 * y0;
  obs.eq_nu = error_gain(decoy.nu);
  obs.eq_mu = error_gain(decoy.mu);
  return obs;
}

double bb84_single_photon_yield(const Bb84ChannelParams& channel) {
  const double eta = channel.eta, pd = channel.p_d;
  const double y0 = 2.0 * pd * (1.0 - pd);
  return (1.0 - pd) * eta + y0 * (1.0 - eta);
}

double bb84_single_photon_error(const Bb84ChannelParams& channel) {
  const double eta = channel.eta, pd = channel.p_d;
  const double y0 = 2.0 * pd * (1.0 - pd);
  const double y1 = bb84_single_photon_yield(channel);
  if (y1 <= 0.0) return 0.0;
  return ((1.0 - pd) * eta * misalignment_error(channel) + 0.5 * y0 * (1.0 - eta)) / y1;
}

DecoyBounds three_decoy_bounds(const DecoyObservations& obs, const DecoyParams& decoy) {
  validate_or_throw(decoy);
  const double mu = decoy.mu, nu = decoy.nu;
  const double n = decoy.n_pulses, k = decoy.k_sigma;

  const auto [y0_lo, y0_hi] = fluctuation_interval(obs.q_vac, n, k);
  const auto [qnu_lo, qnu_hi] = fluctuation_interval(obs.q_nu, n, k);
  const auto [qmu_lo, qmu_hi] = fluctuation_interval(obs.q_mu, n, k);
  const auto [eqvac_lo, eqvac_hi] = fluctuation_interval(obs.eq_vac, n, k);
  const auto [eqnu_lo, eqnu_hi] = fluctuation_interval(obs.eq_nu, n, k);
  (void)y0_lo;
  (void)qnu_hi;
  (void)qmu_lo;
  (void)eqvac_hi;
  (void)eqnu_lo;

  DecoyBounds bounds;
  // Yield bound from the vacuum+weak pair; every observation enters at the
  // end of its interval that makes the bound smaller.
  const double y1 =
      mu / (mu * nu - nu * nu) *
      (qnu_lo * std::exp(nu) - qmu_hi * std::exp(mu) * nu * nu / (mu * mu) -
       (mu * mu - nu * nu) / (mu * mu) * y0_hi);
  bounds.y1_lower = std::max(0.0, y1);
  if (y1 <= 0.0) {
    bounds.degenerate = true;
    bounds.e1_upper = 0.5;
    return bounds;
  }
  const double numer = eqnu_hi * std::exp(nu) - eqvac_lo;
  bounds.e1_upper = std::clamp(numer / (nu * bounds.y1_lower), 0.0, 1.0);
  return bounds;
}

EpsilonResult epsilon_max_interval(const StatsIntervals& iv, const OptimizerConfig& cfg) {
  validate_or_throw(iv);

  detail::ConstraintSet cons;
  cons.rows[0] = detail::ConstraintRow::interval(iv.lo(3, 0), iv.hi(3, 0), iv.lo(0, 0),
                                                 iv.hi(0, 0), iv.lo(1, 0), iv.hi(1, 0));
  cons.rows[1] = detail::ConstraintRow::interval(iv.lo(3, 1), iv.hi(3, 1), iv.lo(0, 1),
                                                 iv.hi(0, 1), iv.lo(1, 1), iv.hi(1, 1));
  cons.rows[2] = detail::ConstraintRow::interval(iv.lo(0, 2), iv.hi(0, 2), iv.lo(0, 0),
                                                 iv.hi(0, 0), iv.lo(0, 1), iv.hi(0, 1));
  cons.rows[3] = detail::ConstraintRow::interval(iv.lo(1, 2), iv.hi(1, 2), iv.lo(1, 0),
                                                 iv.hi(1, 0), iv.lo(1, 1), iv.hi(1, 1));

  // Per-occurrence extremes that maximize the objective: numerator square
  // roots from the upper ends, click sum from the lower ends, and the
  // smallest compatible bit error rate for the all-zero case.
  const double den_lo = iv.lo(0, 0) + iv.lo(1, 1) + iv.lo(0, 1) + iv.lo(1, 0);
  const double err_lo = iv.lo(0, 1) + iv.lo(1, 0);
  const double eb_den = err_lo + iv.hi(0, 0) + iv.hi(1, 1);

  detail::FullObjective obj;
  obj.s32 = std::sqrt(iv.hi(3, 2));
  obj.s01 = std::sqrt(iv.hi(0, 1));
  obj.s10 = std::sqrt(iv.hi(1, 0));
  obj.s00 = std::sqrt(iv.hi(0, 0));
  obj.s11 = std::sqrt(iv.hi(1, 1));
  obj.inv_den = den_lo > 0.0 ? 1.0 / (2.0 * den_lo)
                             : std::numeric_limits<double>::infinity();
  obj.one_minus_eb = eb_den > 0.0 ? 1.0 - err_lo / eb_den : 1.0;

  auto outcome = detail::BoxSearch(obj, cons, cfg).run();

  EpsilonResult result;
  result.epsilon = std::clamp(outcome.best.f, 0.0, 1.0);
  result.argmax = outcome.best.c;
  result.boundary_hit = outcome.boundary_hit;
  result.diagnostics = std::move(outcome.diagnostics);
  return result;
}

SecurityResult infinite_decoy_rate(const Bb84ChannelParams& channel,
                                   const DecoyParams& decoy, const OptimizerConfig& cfg) {
  validate_or_throw(decoy);
  SecurityResult result = key_rate(bb84_stats(channel), cfg);
  const double weight = decoy.mu * std::exp(-decoy.mu);
  result.gain *= weight;
  result.rate_per_pulse = result.gain * result.rate_per_sifted_bit;
  return result;
}

SecurityResult infinite_decoy_rate(const MdiChannelParams& channel,
                                   const DecoyParams& decoy, const OptimizerConfig& cfg) {
  validate_or_throw(decoy);
  SecurityResult result = key_rate(mdiqkd_stats(channel), cfg);
  const double weight =
      decoy.mu * decoy.mu * std::exp(-2.0 * decoy.mu);  // both sources single-photon
  result.gain *= weight;
  result.rate_per_pulse = result.gain * result.rate_per_sifted_bit;
  return result;
}

SecurityResult three_decoy_rate(const Bb84ChannelParams& channel,
                                const DecoyParams& decoy, const OptimizerConfig& cfg) {
  validate_or_throw(channel);
  validate_or_throw(decoy);

  const DecoyObservations obs = simulate_bb84_observations(channel, decoy);
  const DecoyBounds bounds = three_decoy_bounds(obs, decoy);

  const ConditionalStats table = bb84_stats(channel);
  const StatsIntervals intervals =
      StatsIntervals::from_fluctuation(table, decoy.n_pulses, decoy.k_sigma);

  SecurityResult result;
  result.e_b = std::min(bounds.e1_upper, 0.5);
  const double weight = decoy.mu * std::exp(-decoy.mu);
  result.gain = weight * bounds.y1_lower / 2.0;  // basis-0 pair convention

  if (bounds.degenerate || result.gain <= 0.0) {
    result.epsilon = 1.0;
    result.e_p = 0.5;
    result.rate_per_sifted_bit = 0.0;
    result.rate_per_pulse = 0.0;
    result.diagnostics.raw_rate_per_sifted_bit =
        -std::numeric_limits<double>::infinity();
    return result;
  }

  const EpsilonResult eps = epsilon_max_interval(intervals, cfg);
  result.epsilon = eps.epsilon;
  result.argmax = eps.argmax;
  result.boundary_hit = eps.boundary_hit;
  result.diagnostics = eps.diagnostics;

  result.e_p = phase_error_bound(result.e_b, result.epsilon);
  const double raw = 1.0 - binary_entropy(result.e_b) - binary_entropy(result.e_p);
  result.diagnostics.raw_rate_per_sifted_bit = raw;
  result.rate_per_sifted_bit = std::max(0.0, raw);
  result.rate_per_pulse = result.gain * result.rate_per_sifted_bit;
  return result;
}

}  // namespace mbqkd
