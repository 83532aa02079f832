#ifndef MBQKD_CHANNEL_HPP
#define MBQKD_CHANNEL_HPP

#include "mbqkd/qubit.hpp"
#include "mbqkd/stats.hpp"

namespace mbqkd {

/// Symmetric MDIQKD link: per-arm transmission eta, per-detector dark-count
/// probability d, four threshold detectors at the measurement unit.
struct MdiChannelParams {
  double eta = 1.0;  // in [0,1]
  double d = 0.0;    // in [0,1)
};

/// Direct BB84 link: end-to-end efficiency eta, dark-count probability p_d,
/// and sender misalignment angles (degrees). Angle a tilts the basis-0 state
/// for x=1; b and c tilt the basis-1 states for x=2 and x=3.
struct Bb84ChannelParams {
  double eta = 1.0;   // in [0,1]
  double p_d = 0.0;   // in [0,1)
  double a_deg = 0.0;
  double b_deg = 0.0;
  double c_deg = 0.0;
};

void validate_or_throw(const MdiChannelParams& params);
void validate_or_throw(const Bb84ChannelParams& params);

/// eta = 10^(-loss_db/10); negative loss is an error.
double loss_db_to_eta(double loss_db);

/// Detector-model announcement probabilities for MDIQKD: the nine entries
/// the security bound needs. Cross-basis entries are set to
/// (p(1|0,0)+p(1|0,1))/2, the value they take in a symmetric run.
ConditionalStats mdiqkd_stats(const MdiChannelParams& params);

/// Click-model table for BB84 with misaligned sender states and an ideal
/// receiver, written exactly as the nine closed-form expressions in terms
/// of eta, p_d and the angles. Angle b does not appear in any of them.
ConditionalStats bb84_stats(const Bb84ChannelParams& params);

/// The physically complete alternative: build the four misaligned sender
/// states, take detection probabilities tr(rho_x M_y) against the ideal
/// BB84 projectors, and wrap them in the click model
///   p = eta*t*(1-p_d) + (1-eta*t)*p_d*(1-p_d),  t = tr(rho_x M_y).
/// Fills all sixteen entries; here angle b matters (through x=2).
ConditionalStats bb84_stats_from_states(const Bb84ChannelParams& params);

/// The misaligned sender states used by bb84_stats_from_states.
SourceSpec bb84_misaligned_sources(double a_deg, double b_deg, double c_deg);

/// Sifted-event probability per emitted basis-0 pulse pair:
/// (p(1|0,0)+p(1|0,1)+p(1|1,0)+p(1|1,1))/4.
double gain_basis0(const ConditionalStats& stats);

}  // namespace mbqkd

#endif
