#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>

#include "mbqkd/channel.hpp"
#include "mbqkd/errors.hpp"
#include "mbqkd/qubit.hpp"
#include "mbqkd/rng.hpp"
#include "mbqkd/security.hpp"
#include "oracles.hpp"

using namespace mbqkd;

namespace {

ConditionalStats ideal_table() { return ideal_stats(ideal_bb84_sources()); }
ConditionalStats collapse_table() { return ideal_stats(collapse_sources()); }

constexpr double kInvSqrt2 = 0.70710678118654752;

}  // namespace

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(binary_entropy(0.11) == doctest::Approx(0.499916).epsilon(2e-6));
  CHECK(binary_entropy(0.25) == binary_entropy(0.75));
  CHECK_THROWS_AS(binary_entropy(-0.1), ValidationError);
  CHECK_THROWS_AS(binary_entropy(1.1), ValidationError);
}

TEST_CASE("bit error rate") {
  CHECK(bit_error_rate(ideal_table()) == 0.0);

  ConditionalStats s = ideal_table();
  s.set(0, 0, 0.45);
  s.set(1, 1, 0.45);
  s.set(0, 1, 0.05);
  s.set(1, 0, 0.05);
  CHECK(bit_error_rate(s) == doctest::Approx(0.1).epsilon(1e-15));

  for (const auto& [x, y] : {std::pair<int, int>{0, 0}, std::pair<int, int>{0, 1},
                             std::pair<int, int>{1, 0}, std::pair<int, int>{1, 1}})
    s.set(x, y, 0.2);
  CHECK(bit_error_rate(s) == doctest::Approx(0.5).epsilon(1e-15));

  for (const auto& [x, y] : {std::pair<int, int>{0, 0}, std::pair<int, int>{0, 1},
                             std::pair<int, int>{1, 0}, std::pair<int, int>{1, 1}})
    s.set(x, y, 0.0);
  CHECK_THROWS_AS(bit_error_rate(s), NoClicksError);
}

TEST_CASE("objective values at the reference points") {
  // the unique feasible point of the ideal table gives zero deviation
  CHECK(f_objective(kInvSqrt2, kInvSqrt2, kInvSqrt2, kInvSqrt2, ideal_table()) ==
        doctest::Approx(0.0).epsilon(1e-15));
  // all-zero coefficients select the 1 - e_b case
  CHECK(f_objective(0.0, 0.0, 0.0, 0.0, ideal_table()) == 1.0);
  ConditionalStats noisy = ideal_table();
  noisy.set(0, 0, 0.45);
  noisy.set(1, 1, 0.45);
  noisy.set(0, 1, 0.05);
  noisy.set(1, 0, 0.05);
  CHECK(f_objective(0.0, 0.0, 0.0, 0.0, noisy) == doctest::Approx(0.9).epsilon(1e-12));
  // the collapsed table forces the all-zero-product case with e_b = 0
  CHECK(f_objective(0.0, 1.0, 1.0, 0.0, collapse_table()) == 1.0);
}

TEST_CASE("objective agrees with the independent transcription") {
  Rng rng(17);
  const ConditionalStats tables[] = {mdiqkd_stats({0.3, 1e-4}),
                                     bb84_stats({0.4, 1e-4, 5.0, 0.0, 3.0})};
  for (const auto& table : tables) {
    const oracle::TableNine nine = oracle::TableNine::from(table);
    for (int i = 0; i < 2000; ++i) {
      const double c30 = rng.uniform(0.01, 2.0), c31 = rng.uniform(0.01, 2.0);
      const double cp20 = rng.uniform(0.01, 2.0), cp21 = rng.uniform(0.01, 2.0);
      const double mine = f_objective(c30, c31, cp20, cp21, table);
      const double theirs = oracle::f_eval(nine, c30, c31, cp20, cp21);
      CHECK(mine == doctest::Approx(theirs).epsilon(1e-12));
    }
  }
}

TEST_CASE("constraint residuals at the reference points") {
  const auto tight = constraints_residuals(kInvSqrt2, kInvSqrt2, kInvSqrt2, kInvSqrt2,
                                           ideal_table());
  for (const auto& [lhs, rhs] : tight) {
    CHECK(std::abs(lhs) < 1e-12);
    CHECK(std::abs(rhs) < 1e-12);
  }

  const auto broken = constraints_residuals(1.0, 1.0, 1.0, 1.0, ideal_table());
  CHECK(broken[0].first == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(broken[0].second == doctest::Approx(0.25).epsilon(1e-12));

  ConditionalStats quarter;
  for (const auto& [x, y] : ConditionalStats::required_entries()) quarter.set(x, y, 0.25);
  const auto feasible = constraints_residuals(kInvSqrt2, kInvSqrt2, kInvSqrt2, kInvSqrt2,
                                              quarter);
  for (const auto& [lhs, rhs] : feasible) {
    CHECK(lhs >= -1e-12);
    CHECK(rhs >= -1e-12);
  }
}

TEST_CASE("deviation maximization on the ideal table") {
  const EpsilonResult r = epsilon_max(ideal_table());
  CHECK(r.epsilon <= 1e-6);
  for (double c : r.argmax) CHECK(c == doctest::Approx(kInvSqrt2).epsilon(1e-3));
  CHECK_FALSE(r.boundary_hit);
}

TEST_CASE("deviation maximization detects the collapsed sources") {
  const EpsilonResult r = epsilon_max(collapse_table());
  CHECK(r.epsilon == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.argmax[0] == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(r.argmax[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.argmax[2] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.argmax[3] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("deviation agrees with brute force on a noisy detector table") {
  const ConditionalStats table = mdiqkd_stats({0.1, 1e-5});
  const EpsilonResult r = epsilon_max(table);
  const auto brute = oracle::brute_force_epsilon(table);
  REQUIRE(brute.has_value());
  CHECK(r.epsilon == doctest::Approx(*brute).epsilon(1e-3));
}

TEST_CASE("an inconsistent table is reported infeasible") {
  ConditionalStats s = ideal_table();
  s.set(3, 0, 1.0);  // cross statistic incompatible with the matched ones
  s.set(0, 1, 0.0);
  s.set(1, 0, 0.0);
  CHECK_THROWS_AS(epsilon_max(s), InfeasibleError);
}

TEST_CASE("maximum dominates random feasible points") {
  const ConditionalStats table = mdiqkd_stats({0.1, 1e-2});  // fat feasible band
  const EpsilonResult r = epsilon_max(table);
  Rng rng(41);
  int found = 0;
  while (found < 1000) {
    const auto point = oracle::sample_feasible_point(table, rng, 2.0);
    REQUIRE(point.has_value());
    const double f =
        f_objective((*point)[0], (*point)[1], (*point)[2], (*point)[3], table);
    CHECK(r.epsilon + 1e-9 >= std::min(f, 1.0));
    ++found;
  }
}

TEST_CASE("enlarging the search never reduces the deviation materially") {
  const ConditionalStats table = mdiqkd_stats({0.2, 1e-3});
  OptimizerConfig base;
  const double e0 = epsilon_max(table, base).epsilon;
  OptimizerConfig wider = base;
  wider.c_max = 14.0;
  CHECK(epsilon_max(table, wider).epsilon >= e0 - base.feasibility_tol);
  OptimizerConfig denser = base;
  denser.coarse_grid = 61;
  CHECK(epsilon_max(table, denser).epsilon >= e0 - base.feasibility_tol);
}

TEST_CASE("reduced maximization on symmetric tables") {
  SUBCASE("ideal table gives zero") {
    const EpsilonResult r = epsilon_max_symmetric(ideal_table());
    CHECK(r.epsilon <= 1e-6);
  }
  SUBCASE("rejects asymmetric tables") {
    CHECK_THROWS_AS(epsilon_max_symmetric(collapse_table()), ValidationError);
  }
  SUBCASE("agrees with the general maximization on symmetric noisy tables") {
    const std::array<std::pair<double, double>, 3> cases = {{
        {0.02, 0.02}, {0.05, 0.03}, {0.01, 0.08},
    }};
    for (const auto& [eb, ebp] : cases) {
      const ConditionalStats table = oracle::symmetric_table(eb, ebp, 0.5);
      const double full = epsilon_max(table).epsilon;
      const double reduced = epsilon_max_symmetric(table).epsilon;
      CHECK(full == doctest::Approx(reduced).epsilon(1e-3));
    }
  }
  SUBCASE("degenerate half error rate clamps at one") {
    const ConditionalStats table = oracle::symmetric_table(0.5, 0.02, 0.5);
    const EpsilonResult r = epsilon_max_symmetric(table);
    CHECK(r.epsilon <= 1.0);
  }
}

TEST_CASE("phase error bound") {
  CHECK(phase_error_bound(0.0, 0.0) == 0.0);
  CHECK(phase_error_bound(0.0, 1.0) == 0.5);
  CHECK(phase_error_bound(0.05, 0.1) == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(phase_error_bound(0.3, 0.3) == 0.5);
}

TEST_CASE("phase error bound is monotone and capped") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double eb = rng.uniform(0.0, 0.5);
    const double eps = rng.uniform(0.0, 1.0);
    const double base = phase_error_bound(eb, eps);
    CHECK(base <= 0.5);
    CHECK(phase_error_bound(eb + 0.01, eps) >= base);
    CHECK(phase_error_bound(eb, eps + 0.01) >= base);
  }
}

TEST_CASE("key rate pipeline") {
  SUBCASE("ideal table") {
    const SecurityResult r = key_rate(ideal_table());
    CHECK(r.e_b == 0.0);
    CHECK(r.epsilon <= 1e-6);
    CHECK(r.e_p <= 1e-6);
    CHECK(r.rate_per_sifted_bit == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.rate_per_pulse == doctest::Approx(0.25).epsilon(1e-5));
  }
  SUBCASE("collapsed table yields nothing") {
    const SecurityResult r = key_rate(collapse_table());
    CHECK(r.rate_per_sifted_bit == 0.0);
    CHECK(r.rate_per_pulse == 0.0);
    CHECK(r.diagnostics.raw_rate_per_sifted_bit < 0.0);
  }
  SUBCASE("mild loss stays below the trusted-source benchmark") {
    const ConditionalStats table = mdiqkd_stats({loss_db_to_eta(3.0), 1e-5});
    const SecurityResult r = key_rate(table);
    CHECK(r.rate_per_pulse > 0.0);
    const double trusted = 1.0 - 2.0 * binary_entropy(r.e_b);
    CHECK(r.rate_per_sifted_bit < trusted);
  }
  SUBCASE("symmetric path matches when requested") {
    const ConditionalStats table = oracle::symmetric_table(0.03, 0.03, 0.4);
    const SecurityResult full = key_rate(table);
    const SecurityResult sym =
        key_rate(table, {}, EpsilonMethod::symmetric_if_applicable);
    CHECK(full.epsilon == doctest::Approx(sym.epsilon).epsilon(1e-3));
  }
}

TEST_CASE("invalid optimizer configurations are rejected") {
  OptimizerConfig cfg;
  cfg.coarse_grid = 2;
  CHECK_THROWS_AS(epsilon_max(ideal_table(), cfg), ValidationError);
  cfg = {};
  cfg.refine_shrink = 1.5;
  CHECK_THROWS_AS(epsilon_max(ideal_table(), cfg), ValidationError);
}
