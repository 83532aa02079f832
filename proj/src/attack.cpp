#include "mbqkd/attack.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "mbqkd/errors.hpp"
#include "mbqkd/parallel.hpp"
#include "mbqkd/rng.hpp"

namespace mbqkd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

int gamma_index(int eve_dim, int x, int y, int z, int n) {
  return ((x * 4 + y) * 2 + z) * eve_dim + n;
}

// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
// of R's diagonal folded back into Q.
Eigen::MatrixXcd haar_unitary(int dim, Rng& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.gauss_complex();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const complexd d = r(j, j);
    const complexd phase = std::abs(d) > 0.0 ? d / std::abs(d) : complexd(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

// Shared skeleton for the constructed attacks: given for each (x,y) the two
// unnormalized branch vectors of Eve's space, fill gamma and the table.
struct BranchVectors {
  std::vector<complexd> z0, z1;  // length eve_dim
};

AttackInstance make_instance(const SourceSpec& sources, int eve_dim,
                             const std::string& kind, std::uint64_t seed) {
  AttackInstance attack;
  attack.eve_dim = eve_dim;
  attack.gamma.assign(4 * 4 * 2 * eve_dim, complexd{0.0, 0.0});
  attack.sources = sources;
  attack.kind = kind;
  attack.seed = seed;
  return attack;
}

// Normalizes the branch vector into gamma and records the probability.
// p(0)+p(1) is pinned to one by storing only p(1), clamped to [0,1].
void store_branches(AttackInstance& attack, int x, int y, const BranchVectors& branches,
                    double p1_exact = -1.0) {
  double p1 = 0.0;
  for (const auto& v : branches.z1) p1 += std::norm(v);
  const double scale1 = p1 > 0.0 ? 1.0 / std::sqrt(p1) : 0.0;
  double p0 = 0.0;
  for (const auto& v : branches.z0) p0 += std::norm(v);
  const double scale0 = p0 > 0.0 ? 1.0 / std::sqrt(p0) : 0.0;
  for (int n = 0; n < attack.eve_dim; ++n) {
    attack.set_gamma(x, y, 0, n, branches.z0[n] * scale0);
    attack.set_gamma(x, y, 1, n, branches.z1[n] * scale1);
  }
  attack.p_table.set(x, y, std::clamp(p1_exact >= 0.0 ? p1_exact : p1, 0.0, 1.0));
}

}  // namespace

complexd AttackInstance::gamma_at(int x, int y, int z, int n) const {
  return gamma[gamma_index(eve_dim, x, y, z, n)];
}

void AttackInstance::set_gamma(int x, int y, int z, int n, complexd value) {
  gamma[gamma_index(eve_dim, x, y, z, n)] = value;
}

std::vector<std::string> validate(const AttackInstance& attack) {
  std::vector<std::string> problems;
  if (attack.eve_dim < 1) problems.push_back("eve_dim must be positive");
  for (auto msg : validate(attack.p_table)) problems.push_back(std::move(msg));
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 2; ++z) {
        if (!attack.p_table.has(x, y)) continue;
        const double p = z == 1 ? attack.p_table.p1(x, y) : attack.p_table.p0(x, y);
        if (p <= 0.0) continue;
        double norm = 0.0;
        for (int n = 0; n < attack.eve_dim; ++n)
          norm += std::norm(attack.gamma_at(x, y, z, n));
        if (std::abs(norm - 1.0) > 1e-10)
          problems.push_back("gamma(" + std::to_string(x) + "," + std::to_string(y) +
                             "," + std::to_string(z) + ") has norm " +
                             std::to_string(norm));
      }
  return problems;
}

AttackInstance honest_attack(const SourceSpec& sources) {
  validate_or_throw(sources);
  AttackInstance attack = make_instance(sources, 4, "honest", 0);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      const QubitState& a = sources.alice[x];
      const QubitState& b = sources.bob[y];
      // joint amplitudes over (c,d), index c*2+d
      const std::array<complexd, 4> psi{a.a0 * b.a0, a.a0 * b.a1, a.a1 * b.a0,
                                        a.a1 * b.a1};
      const complexd bell = (psi[0] + psi[3]) / std::sqrt(2.0);
      const complexd zero{0.0, 0.0};
      BranchVectors branches;
      branches.z1 = {bell / std::sqrt(2.0), zero, zero, bell / std::sqrt(2.0)};
      branches.z0 = {psi[0] - branches.z1[0], psi[1], psi[2], psi[3] - branches.z1[3]};
      store_branches(attack, x, y, branches, bell_projection_prob(a, b));
    }
  return attack;
}

AttackInstance intercept_resend_attack(const SourceSpec& sources) {
  validate_or_throw(sources);
  AttackInstance attack = make_instance(sources, 4, "intercept-resend", 0);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      const QubitState& a = sources.alice[x];
      const QubitState& b = sources.bob[y];
      const std::array<complexd, 4> psi{a.a0 * b.a0, a.a0 * b.a1, a.a1 * b.a0,
                                        a.a1 * b.a1};
      const complexd zero{0.0, 0.0};
      BranchVectors branches;
      branches.z1 = {psi[0], zero, zero, psi[3]};  // equal computational outcomes
      branches.z0 = {zero, psi[1], psi[2], zero};
      store_branches(attack, x, y, branches);
    }
  return attack;
}

AttackInstance random_attack(std::uint64_t seed, const SourceSpec& sources,
                             int ancilla_dim) {
  validate_or_throw(sources);
  if (ancilla_dim < 1) throw ValidationError("ancilla dimension must be positive");
  const int eve_dim = 4 * ancilla_dim;  // C (x) D (x) ancilla
  const int total = eve_dim * 2;        // including the message qubit

  Rng rng(seed);
  const Eigen::MatrixXcd u = haar_unitary(total, rng);

  AttackInstance attack = make_instance(sources, eve_dim, "random", seed);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      const QubitState& a = sources.alice[x];
      const QubitState& b = sources.bob[y];
      Eigen::VectorXcd in = Eigen::VectorXcd::Zero(total);
      // index ((c*2 + d)*ancilla + anc)*2 + m; input has anc = 0, m = 0
      in(((0 * 2 + 0) * ancilla_dim + 0) * 2 + 0) = a.a0 * b.a0;
      in(((0 * 2 + 1) * ancilla_dim + 0) * 2 + 0) = a.a0 * b.a1;
      in(((1 * 2 + 0) * ancilla_dim + 0) * 2 + 0) = a.a1 * b.a0;
      in(((1 * 2 + 1) * ancilla_dim + 0) * 2 + 0) = a.a1 * b.a1;
      const Eigen::VectorXcd out = u * in;
      BranchVectors branches;
      branches.z0.resize(eve_dim);
      branches.z1.resize(eve_dim);
      for (int n = 0; n < eve_dim; ++n) {
        branches.z0[n] = out(n * 2 + 0);
        branches.z1[n] = out(n * 2 + 1);
      }
      store_branches(attack, x, y, branches);
    }
  return attack;
}

namespace {

// min over theta of -Re(e^{i theta} z): coarse 360-point grid, then
// golden-section refinement on the bracketing interval.
double minimize_phase_term(complexd z) {
  auto g = [&](double theta) {
    return -(std::cos(theta) * z.real() - std::sin(theta) * z.imag());
  };
  const int n = 360;
  double best_theta = 0.0, best = g(0.0);
  for (int i = 1; i < n; ++i) {
    const double theta = kTwoPi * i / n;
    const double v = g(theta);
    if (v < best) {
      best = v;
      best_theta = theta;
    }
  }
  double lo = best_theta - kTwoPi / n;
  double hi = best_theta + kTwoPi / n;
  const double inv_phi = 0.61803398874989484820458683436564;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = g(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = g(x2);
    }
  }
  return std::min({best, f1, f2});
}

}  // namespace

PhaseErrorReport actual_errors(const AttackInstance& attack) {
  const ConditionalStats& t = attack.p_table;
  const double p00 = t.p1(0, 0), p01 = t.p1(0, 1), p10 = t.p1(1, 0), p11 = t.p1(1, 1);
  const double den = p00 + p01 + p10 + p11;
  if (den <= 0.0)
    throw NoClicksError("attack never announces on basis-0 pairs");

  // 4x4 density matrix over (A,B) in basis |00>,|01>,|10>,|11>.
  std::array<std::array<complexd, 4>, 4> rho{};
  const std::array<double, 4> amp{std::sqrt(p00), std::sqrt(p01), std::sqrt(p10),
                                  std::sqrt(p11)};
  const std::array<std::pair<int, int>, 4> inputs{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  for (int n = 0; n < attack.eve_dim; ++n) {
    std::array<complexd, 4> v;
    for (int k = 0; k < 4; ++k)
      v[k] = amp[k] * attack.gamma_at(inputs[k].first, inputs[k].second, 1, n);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) rho[r][c] += v[r] * std::conj(v[c]);
  }
  for (auto& row : rho)
    for (auto& e : row) e /= den;

  PhaseErrorReport report;
  report.e_b_actual = rho[1][1].real() + rho[2][2].real();
  const double even = 0.5 * (rho[0][0].real() + rho[3][3].real()) +
                      minimize_phase_term(rho[0][3]);
  const double odd = 0.5 * (rho[1][1].real() + rho[2][2].real()) +
                     minimize_phase_term(rho[1][2]);
  report.e_p_actual = std::max(0.0, even + odd);
  return report;
}

std::pair<double, double> interior_bound_terms(const AttackInstance& attack) {
  const auto ca = expansion_coefficients(attack.sources.alice[3], attack.sources.alice[0],
                                         attack.sources.alice[1]);
  const auto cb = expansion_coefficients(attack.sources.bob[2], attack.sources.bob[0],
                                         attack.sources.bob[1]);
  const ConditionalStats& t = attack.p_table;
  const complexd phase = std::polar(1.0, ca.theta + cb.theta);
  const double w00 = ca.c0 * cb.c0 * std::sqrt(t.p1(0, 0));
  const double w11 = ca.c1 * cb.c1 * std::sqrt(t.p1(1, 1));
  double lhs = 0.0;
  for (int n = 0; n < attack.eve_dim; ++n) {
    const complexd term =
        w00 * attack.gamma_at(0, 0, 1, n) + w11 * phase * attack.gamma_at(1, 1, 1, n);
    lhs += std::norm(term);
  }
  const double rhs_root = std::sqrt(t.p1(3, 2)) + std::sqrt(t.p1(0, 1)) * ca.c0 * cb.c1 +
                          std::sqrt(t.p1(1, 0)) * ca.c1 * cb.c0;
  return {lhs, rhs_root * rhs_root};
}

namespace {

QubitState random_qubit(Rng& rng) {
  QubitState q{rng.gauss_complex(), rng.gauss_complex()};
  return q.normalized();
}

// Random quadruples whose true expansion coefficients stay comfortably
// inside the search box; otherwise the audit would probe box sizing rather
// than the bound.
SourceSpec sample_sources(Rng& rng, double coeff_cap) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    SourceSpec s;
    for (int i = 0; i < 4; ++i) {
      s.alice[i] = random_qubit(rng);
      s.bob[i] = random_qubit(rng);
    }
    try {
      const auto ca = expansion_coefficients(s.alice[3], s.alice[0], s.alice[1]);
      const auto cb = expansion_coefficients(s.bob[2], s.bob[0], s.bob[1]);
      const double worst = std::max({ca.c0, ca.c1, cb.c0, cb.c1});
      if (worst <= coeff_cap) return s;
    } catch (const DegenerateBasisError&) {
      // basis pair too close to parallel; resample
    }
  }
  return ideal_bb84_sources();
}

}  // namespace

AuditReport soundness_audit(std::uint64_t trials, std::uint64_t seed,
                            const OptimizerConfig& cfg, int ancilla_dim_max) {
  if (trials < 1) throw ValidationError("audit requires at least one trial");
  if (ancilla_dim_max < 1) throw ValidationError("ancilla dimension must be positive");

  struct TrialOutcome {
    bool pass = false;
    double margin = 0.0;
    std::string reason;
    std::string artifact;
  };
  std::vector<TrialOutcome> outcomes(trials);

  detail::parallel_for(trials, [&](std::size_t t) {
    TrialOutcome& out = outcomes[t];
    const std::uint64_t trial_seed = Rng::derive(seed, t);
    Rng rng(trial_seed);

    SourceSpec sources;
    switch (t % 8) {
      case 0: sources = ideal_bb84_sources(); break;
      case 1: sources = collapse_sources(); break;
      default: sources = sample_sources(rng, 0.8 * cfg.c_max); break;
    }

    AttackInstance attack;
    switch (t % 5) {
      case 0: attack = honest_attack(sources); break;
      case 1: attack = intercept_resend_attack(sources); break;
      default: {
        const int ancilla = 1 + static_cast<int>(rng.next_u64() % ancilla_dim_max);
        attack = random_attack(rng.next_u64(), sources, ancilla);
        break;
      }
    }

    try {
      const double e_b = bit_error_rate(attack.p_table);
      const EpsilonResult eps = epsilon_max(attack.p_table, cfg);
      const PhaseErrorReport errors = actual_errors(attack);
      const double bound = phase_error_bound(e_b, eps.epsilon);
      out.margin = bound - errors.e_p_actual;
      out.pass = errors.e_p_actual <= bound + kAuditTolerance;
      if (!out.pass) {
        out.reason = "phase error " + std::to_string(errors.e_p_actual) +
                     " exceeds bound " + std::to_string(bound);
        out.artifact = attack_to_json(attack);
      }
    } catch (const std::exception& e) {
      out.pass = false;
      out.margin = -std::numeric_limits<double>::infinity();
      out.reason = std::string("pipeline error: ") + e.what();
      out.artifact = attack_to_json(attack);
    }
  });

  AuditReport report;
  report.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto& out = outcomes[t];
    if (out.pass) {
      ++report.passes;
    } else {
      ++report.failures;
      report.failure_artifacts.push_back({t, out.reason, out.artifact});
    }
    report.worst_margin = std::min(report.worst_margin, out.margin);
  }
  return report;
}

std::string attack_to_json(const AttackInstance& attack) {
  nlohmann::json doc;
  doc["kind"] = attack.kind;
  doc["seed"] = attack.seed;
  doc["eve_dim"] = attack.eve_dim;

  auto states = [](const std::array<QubitState, 4>& arr) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& q : arr)
      list.push_back({q.a0.real(), q.a0.imag(), q.a1.real(), q.a1.imag()});
    return list;
  };
  doc["sources"]["alice"] = states(attack.sources.alice);
  doc["sources"]["bob"] = states(attack.sources.bob);

  nlohmann::json gr = nlohmann::json::array(), gi = nlohmann::json::array();
  for (const auto& g : attack.gamma) {
    gr.push_back(g.real());
    gi.push_back(g.imag());
  }
  doc["gamma_re"] = std::move(gr);
  doc["gamma_im"] = std::move(gi);

  nlohmann::json p1 = nlohmann::json::object();
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      if (attack.p_table.has(x, y))
        p1[std::to_string(x) + "," + std::to_string(y)] = attack.p_table.p1(x, y);
  doc["p_table"] = std::move(p1);
  return doc.dump(2) + "\n";
}

AttackInstance attack_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("attack artifact is not valid JSON: ") + e.what());
  }
  AttackInstance attack;
  try {
    attack.kind = doc.at("kind").get<std::string>();
    attack.seed = doc.at("seed").get<std::uint64_t>();
    attack.eve_dim = doc.at("eve_dim").get<int>();
    if (attack.eve_dim < 1 || attack.eve_dim > 4096)
      throw ValidationError("eve_dim out of range");

    auto load_states = [](const nlohmann::json& list, std::array<QubitState, 4>& arr) {
      for (int i = 0; i < 4; ++i) {
        const auto& q = list.at(i);
        arr[i] = QubitState{{q.at(0).get<double>(), q.at(1).get<double>()},
                            {q.at(2).get<double>(), q.at(3).get<double>()}};
      }
    };
    load_states(doc.at("sources").at("alice"), attack.sources.alice);
    load_states(doc.at("sources").at("bob"), attack.sources.bob);

    const auto& gr = doc.at("gamma_re");
    const auto& gi = doc.at("gamma_im");
    const std::size_t expect = static_cast<std::size_t>(4 * 4 * 2) * attack.eve_dim;
    if (gr.size() != expect || gi.size() != expect)
      throw ValidationError("gamma arrays have the wrong length");
    attack.gamma.resize(expect);
    for (std::size_t i = 0; i < expect; ++i)
      attack.gamma[i] = complexd{gr.at(i).get<double>(), gi.at(i).get<double>()};

    for (const auto& [key, value] : doc.at("p_table").items()) {
      if (key.size() != 3 || key[1] != ',')
        throw ValidationError("bad p_table key \"" + key + "\"");
      attack.p_table.set(key[0] - '0', key[2] - '0', value.get<double>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed attack artifact: ") + e.what());
  }
  return attack;
}

PhaseErrorReport replay_attack(const AttackInstance& attack, const OptimizerConfig& cfg) {
  const double e_b = bit_error_rate(attack.p_table);
  const EpsilonResult eps = epsilon_max(attack.p_table, cfg);
  PhaseErrorReport report = actual_errors(attack);
  report.bound = phase_error_bound(e_b, eps.epsilon);
  report.sound = report.e_p_actual <= report.bound + kAuditTolerance;
  return report;
}

}  // namespace mbqkd
