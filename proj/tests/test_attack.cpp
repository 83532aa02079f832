#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mbqkd/attack.hpp"
#include "mbqkd/errors.hpp"
#include "mbqkd/qubit.hpp"
#include "mbqkd/rng.hpp"
#include "mbqkd/security.hpp"

using namespace mbqkd;

namespace {

QubitState random_state(Rng& rng) {
  QubitState q{rng.gauss_complex(), rng.gauss_complex()};
  return q.normalized();
}

SourceSpec random_sources(Rng& rng) {
  SourceSpec s;
  for (int i = 0; i < 4; ++i) {
    s.alice[i] = random_state(rng);
    s.bob[i] = random_state(rng);
  }
  return s;
}

// Closed form of the phase minimization: each term reduces to
// (diagonal sum)/2 - |off-diagonal|.
double analytic_e_p(const AttackInstance& attack) {
  const ConditionalStats& t = attack.p_table;
  const double p00 = t.p1(0, 0), p01 = t.p1(0, 1), p10 = t.p1(1, 0), p11 = t.p1(1, 1);
  const double den = p00 + p01 + p10 + p11;
  complexd even{0.0, 0.0}, odd{0.0, 0.0};
  double d00 = 0, d01 = 0, d10 = 0, d11 = 0;
  for (int n = 0; n < attack.eve_dim; ++n) {
    const complexd g00 = std::sqrt(p00) * attack.gamma_at(0, 0, 1, n);
    const complexd g01 = std::sqrt(p01) * attack.gamma_at(0, 1, 1, n);
    const complexd g10 = std::sqrt(p10) * attack.gamma_at(1, 0, 1, n);
    const complexd g11 = std::sqrt(p11) * attack.gamma_at(1, 1, 1, n);
    d00 += std::norm(g00);
    d01 += std::norm(g01);
    d10 += std::norm(g10);
    d11 += std::norm(g11);
    even += g00 * std::conj(g11);
    odd += g01 * std::conj(g10);
  }
  return (0.5 * (d00 + d11) - std::abs(even) + 0.5 * (d01 + d10) - std::abs(odd)) / den;
}

}  // namespace

TEST_CASE("honest measurement reproduces the projection table exactly") {
  const SourceSpec sources = ideal_bb84_sources();
  const AttackInstance attack = honest_attack(sources);
  const ConditionalStats expected = ideal_stats(sources);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) CHECK(attack.p_table.p1(x, y) == expected.p1(x, y));
  CHECK(validate(attack).empty());
}

TEST_CASE("honest measurement on collapsed sources matches their table") {
  const SourceSpec sources = collapse_sources();
  const AttackInstance attack = honest_attack(sources);
  const ConditionalStats expected = ideal_stats(sources);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) CHECK(attack.p_table.p1(x, y) == expected.p1(x, y));
}

TEST_CASE("honest attacks on random sources satisfy the invariants") {
  Rng rng(71);
  for (int i = 0; i < 100; ++i) CHECK(validate(honest_attack(random_sources(rng))).empty());
}

TEST_CASE("random attacks are deterministic in the seed") {
  const SourceSpec sources = ideal_bb84_sources();
  const AttackInstance a = random_attack(1, sources, 2);
  const AttackInstance b = random_attack(1, sources, 2);
  CHECK(a.eve_dim == 8);
  CHECK(a.gamma == b.gamma);
  const AttackInstance c = random_attack(2, sources, 2);
  CHECK(a.gamma != c.gamma);
}

TEST_CASE("random attacks produce valid instances and tables") {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const SourceSpec sources = seed % 3 == 0 ? ideal_bb84_sources() : random_sources(rng);
    const AttackInstance attack = random_attack(seed, sources, 1 + seed % 2);
    CHECK(validate(attack).empty());
    CHECK(validate(attack.p_table).empty());
  }
}

TEST_CASE("honest ideal channel carries no errors") {
  const PhaseErrorReport report = actual_errors(honest_attack(ideal_bb84_sources()));
  CHECK(report.e_b_actual == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(report.e_p_actual == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("honest collapsed channel still distills perfectly") {
  const PhaseErrorReport report = actual_errors(honest_attack(collapse_sources()));
  CHECK(report.e_p_actual == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(report.e_p_actual <= 0.5);
}

TEST_CASE("intercept-resend leaves a large phase error") {
  const AttackInstance attack = intercept_resend_attack(ideal_bb84_sources());
  const PhaseErrorReport report = actual_errors(attack);
  CHECK(report.e_b_actual == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(report.e_p_actual == doctest::Approx(0.5).epsilon(1e-12));
  // and the bound catches it exactly: the induced table forces epsilon 1/2
  const EpsilonResult eps = epsilon_max(attack.p_table);
  CHECK(eps.epsilon == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("attack with no basis-0 clicks is rejected") {
  AttackInstance attack = honest_attack(ideal_bb84_sources());
  attack.p_table.set(0, 0, 0.0);
  attack.p_table.set(0, 1, 0.0);
  attack.p_table.set(1, 0, 0.0);
  attack.p_table.set(1, 1, 0.0);
  CHECK_THROWS_AS(actual_errors(attack), NoClicksError);
}

TEST_CASE("grid-plus-golden phase minimization matches the closed form") {
  Rng rng(19);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const AttackInstance attack = random_attack(seed, random_sources(rng), 2);
    const PhaseErrorReport report = actual_errors(attack);
    CHECK(report.e_p_actual == doctest::Approx(analytic_e_p(attack)).epsilon(1e-9));
    CHECK(report.e_p_actual >= 0.0);
    CHECK(report.e_p_actual <= 1.0);
    CHECK(report.e_b_actual >= 0.0);
    CHECK(report.e_b_actual <= 1.0);
  }
}

TEST_CASE("inner inequality of the bound holds for every generated attack") {
  Rng rng(29);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SourceSpec sources;
    switch (seed % 3) {
      case 0: sources = ideal_bb84_sources(); break;
      default: sources = random_sources(rng); break;
    }
    AttackInstance attack;
    switch (seed % 4) {
      case 0: attack = honest_attack(sources); break;
      case 1: attack = intercept_resend_attack(sources); break;
      default: attack = random_attack(seed, sources, 1 + seed % 2); break;
    }
    try {
      const auto [lhs, rhs] = interior_bound_terms(attack);
      CHECK(lhs <= rhs + 1e-9);
    } catch (const DegenerateBasisError&) {
      // random basis pair too close to parallel for the expansion
    }
  }
}

TEST_CASE("attack artifacts round-trip through JSON") {
  const AttackInstance attack = random_attack(99, ideal_bb84_sources(), 2);
  const std::string text = attack_to_json(attack);
  const AttackInstance back = attack_from_json(text);
  CHECK(back.eve_dim == attack.eve_dim);
  CHECK(back.kind == attack.kind);
  CHECK(back.seed == attack.seed);
  CHECK(back.gamma == attack.gamma);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      CHECK(back.p_table.p1(x, y) == attack.p_table.p1(x, y));
  CHECK(attack_to_json(back) == text);

  const PhaseErrorReport a = replay_attack(attack);
  const PhaseErrorReport b = replay_attack(back);
  CHECK(a.e_p_actual == b.e_p_actual);
  CHECK(a.bound == b.bound);
  CHECK(a.sound);
  CHECK_THROWS_AS(attack_from_json("{"), ValidationError);
}

TEST_CASE("short audits pass and include the exact corner cases") {
  const AuditReport report = soundness_audit(50, 7);
  CHECK(report.trials == 50);
  CHECK(report.passes == 50);
  CHECK(report.failures == 0);
  CHECK(report.failure_artifacts.empty());
  // the honest ideal trial sits exactly on the bound (up to polish accuracy)
  CHECK(report.worst_margin >= -1e-8);
  CHECK(report.worst_margin <= 1e-8);
}

TEST_CASE("audit rejects a zero trial count") {
  CHECK_THROWS_AS(soundness_audit(0, 7), ValidationError);
}
