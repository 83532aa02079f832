#ifndef MBQKD_DECOY_HPP
#define MBQKD_DECOY_HPP

#include <limits>

#include "mbqkd/channel.hpp"
#include "mbqkd/security.hpp"
#include "mbqkd/stats.hpp"

namespace mbqkd {

/// Poisson-source settings: signal intensity mu, weak-decoy intensity nu
/// (0 < nu < mu), pulses per encoding state (may be infinite), and the
/// sigma multiplier for statistical fluctuations.
struct DecoyParams {
  double mu = 0.5;
  double nu = 0.1;
  double n_pulses = std::numeric_limits<double>::infinity();
  double k_sigma = 5.0;
};

void validate_or_throw(const DecoyParams& params);

/// Matched-basis-0 observables per intensity: total gains and error gains
/// for the vacuum, weak-decoy and signal settings.
struct DecoyObservations {
  double q_vac = 0.0;
  double q_nu = 0.0;
  double q_mu = 0.0;
  double eq_vac = 0.0;
  double eq_nu = 0.0;
  double eq_mu = 0.0;
};

struct DecoyBounds {
  double y1_lower = 0.0;
  double e1_upper = 0.0;
  bool degenerate = false;  // bounds collapsed (clamped) and are uninformative
};

/// Simulated coherent-source observations for the BB84 channel, consistent
/// with the single-photon click model: an n-photon pulse is detected unless
/// every photon is lost, and dark counts fire on empty arrivals.
DecoyObservations simulate_bb84_observations(const Bb84ChannelParams& channel,
                                             const DecoyParams& decoy);

/// Single-photon yield and error truth values of the same model (oracle
/// side of the estimation tests).
double bb84_single_photon_yield(const Bb84ChannelParams& channel);
double bb84_single_photon_error(const Bb84ChannelParams& channel);

/// Vacuum+weak analytic decoy bounds. Observed quantities are first widened
/// to k_sigma/N intervals, then each bound takes its worst case. A lower
/// yield bound that collapses to zero is clamped and flagged.
DecoyBounds three_decoy_bounds(const DecoyObservations& obs, const DecoyParams& decoy);

/// Deviation maximization with every table entry ranging over an interval:
/// constraints hold if satisfiable for some table in the box, and the
/// objective takes per-occurrence extremes. Result dominates epsilon_max of
/// any point table inside the box.
EpsilonResult epsilon_max_interval(const StatsIntervals& intervals,
                                   const OptimizerConfig& cfg = {});

/// Infinite-decoy rates: the single-photon table is known exactly, so the
/// plain pipeline runs on it and the per-pulse rate is scaled by the
/// single-photon emission weight (mu e^-mu for BB84, mu^2 e^-2mu for the
/// two-source MDIQKD pairing).
SecurityResult infinite_decoy_rate(const Bb84ChannelParams& channel,
                                   const DecoyParams& decoy,
                                   const OptimizerConfig& cfg = {});
SecurityResult infinite_decoy_rate(const MdiChannelParams& channel,
                                   const DecoyParams& decoy,
                                   const OptimizerConfig& cfg = {});

/// Finite three-decoy BB84 rate: decoy bounds give the single-photon yield
/// and error, fluctuation-widened single-photon statistics feed the
/// interval deviation maximization, and the gain uses the lower yield bound.
SecurityResult three_decoy_rate(const Bb84ChannelParams& channel,
                                const DecoyParams& decoy,
                                const OptimizerConfig& cfg = {});

}  // namespace mbqkd

#endif
