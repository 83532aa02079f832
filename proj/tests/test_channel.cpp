#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mbqkd/channel.hpp"
#include "mbqkd/errors.hpp"
#include "mbqkd/qubit.hpp"
#include "mbqkd/stats.hpp"

using namespace mbqkd;

TEST_CASE("loss to efficiency conversion") {
  CHECK(loss_db_to_eta(0.0) == 1.0);
  CHECK(loss_db_to_eta(10.0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(loss_db_to_eta(20.0) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK_THROWS_AS(loss_db_to_eta(-1.0), ValidationError);
}

TEST_CASE("lossless noiseless detectors reproduce the honest table") {
  const ConditionalStats s = mdiqkd_stats({1.0, 0.0});
  CHECK(s.p1(0, 0) == 0.5);
  CHECK(s.p1(1, 1) == 0.5);
  CHECK(s.p1(0, 1) == 0.0);
  CHECK(s.p1(1, 0) == 0.0);
  CHECK(s.p1(3, 2) == 0.0);
  CHECK(s.p1(3, 0) == 0.25);
  CHECK(s.p1(3, 1) == 0.25);
  CHECK(s.p1(0, 2) == 0.25);
  CHECK(s.p1(1, 2) == 0.25);

  // matched sub-table equals the Bell-projection table of ideal sources
  const ConditionalStats ideal = ideal_stats(ideal_bb84_sources());
  for (const auto& [x, y] : {std::pair<int, int>{0, 0}, std::pair<int, int>{0, 1},
                             std::pair<int, int>{1, 0}, std::pair<int, int>{1, 1},
                             std::pair<int, int>{3, 2}})
    CHECK(s.p1(x, y) == ideal.p1(x, y));
}

TEST_CASE("dead channel gives an all-zero table") {
  const ConditionalStats s = mdiqkd_stats({0.0, 0.0});
  for (const auto& [x, y] : ConditionalStats::required_entries())
    CHECK(s.p1(x, y) == 0.0);
}

TEST_CASE("detector model at eta=0.1, d=1e-5") {
  const double eta = 0.1, d = 1e-5;
  const ConditionalStats s = mdiqkd_stats({eta, d});

  // independent regrouping of the same click expansion
  const double q2 = (1.0 - d) * (1.0 - d);
  const double indep = eta * eta * q2 / 2.0 +
                       2.0 * d * q2 * (1.0 - eta) * (eta + (1.0 - eta) * d);
  CHECK(s.p1(0, 0) == doctest::Approx(indep).epsilon(1e-15));
  CHECK(s.p1(0, 0) == doctest::Approx(5.0018e-3).epsilon(1e-4));
  CHECK(s.p1(1, 0) ==
        doctest::Approx(2.0 * d * q2 * (1.0 - eta) * (eta + (1.0 - eta) * d))
            .epsilon(1e-15));
  CHECK(s.p1(3, 0) == doctest::Approx((s.p1(0, 0) + s.p1(0, 1)) / 2.0).epsilon(1e-15));
}

TEST_CASE("matched-correct click probability grows with eta") {
  const double d = 1e-5;
  double prev = -1.0;
  for (double eta = 0.0; eta <= 1.0; eta += 0.02) {
    const double p = mdiqkd_stats({eta, d}).p1(0, 0);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("bb84 click model without noise") {
  const ConditionalStats s = bb84_stats({1.0, 0.0, 0.0, 0.0, 0.0});
  CHECK(s.p1(0, 0) == 1.0);
  CHECK(s.p1(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.p1(0, 1) == 0.0);
  CHECK(s.p1(1, 0) == 0.0);
  CHECK(s.p1(3, 2) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(s.p1(3, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.p1(3, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.p1(0, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.p1(1, 2) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("three-degree misalignment on the basis-0 sender") {
  const ConditionalStats s = bb84_stats({1.0, 0.0, 3.0, 3.0, 3.0});
  // second trig route: sin^2 a = (1 - cos 2a) / 2
  const double a = 3.0 * M_PI / 180.0;
  const double expected = (1.0 - std::cos(2.0 * a)) / 2.0;
  CHECK(s.p1(1, 0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(s.p1(1, 0) == doctest::Approx(2.7390523e-3).epsilon(1e-6));
}

TEST_CASE("dead bb84 channel gives an all-zero table") {
  const ConditionalStats s = bb84_stats({0.0, 0.0, 7.0, 5.0, 3.0});
  for (const auto& [x, y] : ConditionalStats::required_entries())
    CHECK(s.p1(x, y) == 0.0);
}

TEST_CASE("aligned bb84 tables satisfy the symmetric identities") {
  for (double eta : {1.0, 0.3, 0.05})
    CHECK(is_symmetric_case(bb84_stats({eta, 1e-5, 0.0, 0.0, 0.0}), 1e-12));
}

TEST_CASE("channel tables stay in range across the parameter space") {
  for (double eta : {0.0, 0.01, 0.37, 1.0})
    for (double d : {0.0, 1e-5, 0.2}) {
      CHECK(validate(mdiqkd_stats({eta, d})).empty());
      for (double angle : {0.0, 9.0, 37.0})
        CHECK(validate(bb84_stats({eta, d, angle, angle, angle})).empty());
    }
}

TEST_CASE("state-derived bb84 table matches the closed forms when darks vanish") {
  for (double a : {0.0, 3.0, 11.0})
    for (double c : {0.0, 5.0}) {
      const Bb84ChannelParams params{0.43, 0.0, a, 17.0, c};
      const ConditionalStats closed = bb84_stats(params);
      const ConditionalStats derived = bb84_stats_from_states(params);
      for (const auto& [x, y] : ConditionalStats::required_entries())
        CHECK(derived.p1(x, y) == doctest::Approx(closed.p1(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("angle b only moves state-derived entries for x=2") {
  const Bb84ChannelParams flat{0.5, 1e-5, 2.0, 0.0, 2.0};
  const Bb84ChannelParams tilted{0.5, 1e-5, 2.0, 6.0, 2.0};
  const ConditionalStats s0 = bb84_stats_from_states(flat);
  const ConditionalStats s1 = bb84_stats_from_states(tilted);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      if (x == 2)
        continue;
      CHECK(s0.p1(x, y) == doctest::Approx(s1.p1(x, y)).epsilon(1e-14));
    }
  CHECK(std::abs(s0.p1(2, 0) - s1.p1(2, 0)) > 1e-4);
  // the closed forms never see b at all
  CHECK(bb84_stats(flat).p1(0, 2) == bb84_stats(tilted).p1(0, 2));
}

TEST_CASE("basis-0 gain") {
  CHECK(gain_basis0(mdiqkd_stats({1.0, 0.0})) == 0.25);
  CHECK(gain_basis0(mdiqkd_stats({0.0, 0.0})) == 0.0);
  CHECK(gain_basis0(bb84_stats({1.0, 0.0, 0.0, 0.0, 0.0})) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(mdiqkd_stats({1.5, 0.0}), ValidationError);
  CHECK_THROWS_AS(mdiqkd_stats({0.5, 1.0}), ValidationError);
  CHECK_THROWS_AS(bb84_stats({-0.1, 0.0, 0.0, 0.0, 0.0}), ValidationError);
}
