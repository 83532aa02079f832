// mbqkd: secure-key rates for MDIQKD and BB84 with uncharacterized qubit
// sources, driven by mismatched-basis announcement statistics.
//
// Subcommands: simulate, analyze, sweep, attack-audit.
// Exit codes: 0 success, 1 usage, 2 validation, 3 infeasible statistics,
// 4 audit violation.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mbqkd/attack.hpp"
#include "mbqkd/channel.hpp"
#include "mbqkd/decoy.hpp"
#include "mbqkd/errors.hpp"
#include "mbqkd/parallel.hpp"
#include "mbqkd/security.hpp"
#include "mbqkd/stats.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitAuditViolation = 4;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw mbqkd::ValidationError("cannot open output file: " + path);
  out << text;
  if (!out) throw mbqkd::ValidationError("failed writing output file: " + path);
}

double parse_pulses(const std::string& text) {
  if (text == "inf" || text == "INF" || text == "Inf")
    return std::numeric_limits<double>::infinity();
  try {
    const double v = std::stod(text);
    if (!(v > 0.0)) throw mbqkd::ValidationError("--pulses must be positive or inf");
    return v;
  } catch (const std::invalid_argument&) {
    throw mbqkd::ValidationError("--pulses expects a number or \"inf\"");
  }
}

json security_result_to_json(const mbqkd::SecurityResult& r, bool diagnostics) {
  json doc;
  doc["e_b"] = r.e_b;
  doc["epsilon"] = r.epsilon;
  doc["e_p"] = r.e_p;
  doc["gain"] = r.gain;
  doc["rate_per_sifted_bit"] = r.rate_per_sifted_bit;
  doc["rate_per_pulse"] = r.rate_per_pulse;
  doc["argmax"] = {r.argmax[0], r.argmax[1], r.argmax[2], r.argmax[3]};
  doc["boundary_hit"] = r.boundary_hit;
  if (diagnostics) {
    json d;
    d["incumbent_history"] = r.diagnostics.incumbent_history;
    d["feasible_cells"] = r.diagnostics.feasible_cells;
    d["evaluations"] = r.diagnostics.evaluations;
    d["polish_starts"] = r.diagnostics.polish_starts;
    d["max_violation_at_argmax"] = r.diagnostics.max_violation_at_argmax;
    d["raw_rate_per_sifted_bit"] = r.diagnostics.raw_rate_per_sifted_bit;
    doc["diagnostics"] = std::move(d);
  }
  return doc;
}

// ---------------------------------------------------------------------------
// sweep

struct CurveSpec {
  std::string label = "curve";
  std::string protocol = "mdiqkd";       // mdiqkd | bb84
  std::string source = "single-photon";  // single-photon | coherent
  std::string decoy_mode = "infinite";   // infinite | three
  bool from_states = false;
  double dark = 0.0;  // MDIQKD detector dark-count probability
  double pd = 0.0;    // BB84 dark-count probability
  double mis_a = 0.0, mis_b = 0.0, mis_c = 0.0;
  mbqkd::DecoyParams decoy;
};

struct SweepConfig {
  double loss_start = 0.0, loss_stop = 40.0, loss_step = 1.0;
  std::string out_prefix = "sweep";
  mbqkd::OptimizerConfig opt;
  std::vector<CurveSpec> curves;
};

void apply_curve_json(CurveSpec& curve, const json& doc) {
  if (doc.contains("label")) curve.label = doc.at("label").get<std::string>();
  if (doc.contains("protocol")) curve.protocol = doc.at("protocol").get<std::string>();
  if (doc.contains("source")) curve.source = doc.at("source").get<std::string>();
  if (doc.contains("decoy_mode"))
    curve.decoy_mode = doc.at("decoy_mode").get<std::string>();
  if (doc.contains("channel")) {
    const json& ch = doc.at("channel");
    if (ch.contains("dark")) curve.dark = ch.at("dark").get<double>();
    if (ch.contains("pd")) curve.pd = ch.at("pd").get<double>();
    if (ch.contains("mis_a")) curve.mis_a = ch.at("mis_a").get<double>();
    if (ch.contains("mis_b")) curve.mis_b = ch.at("mis_b").get<double>();
    if (ch.contains("mis_c")) curve.mis_c = ch.at("mis_c").get<double>();
    if (ch.contains("from_states")) curve.from_states = ch.at("from_states").get<bool>();
  }
  if (doc.contains("decoy")) {
    const json& de = doc.at("decoy");
    if (de.contains("mu")) curve.decoy.mu = de.at("mu").get<double>();
    if (de.contains("nu")) curve.decoy.nu = de.at("nu").get<double>();
    if (de.contains("pulses")) {
      if (de.at("pulses").is_string())
        curve.decoy.n_pulses = parse_pulses(de.at("pulses").get<std::string>());
      else
        curve.decoy.n_pulses = de.at("pulses").get<double>();
    }
    if (de.contains("ksigma")) curve.decoy.k_sigma = de.at("ksigma").get<double>();
  }
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mbqkd::ValidationError("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw mbqkd::ValidationError(std::string("config is not valid JSON: ") + e.what());
  }

  SweepConfig config;
  if (doc.contains("loss_db")) {
    const json& l = doc.at("loss_db");
    if (l.contains("start")) config.loss_start = l.at("start").get<double>();
    if (l.contains("stop")) config.loss_stop = l.at("stop").get<double>();
    if (l.contains("step")) config.loss_step = l.at("step").get<double>();
  }
  if (doc.contains("out_prefix")) config.out_prefix = doc.at("out_prefix").get<std::string>();
  if (doc.contains("optimizer")) {
    const json& o = doc.at("optimizer");
    if (o.contains("c_max")) config.opt.c_max = o.at("c_max").get<double>();
    if (o.contains("coarse_grid")) config.opt.coarse_grid = o.at("coarse_grid").get<int>();
    if (o.contains("refine_rounds"))
      config.opt.refine_rounds = o.at("refine_rounds").get<int>();
    if (o.contains("refine_shrink"))
      config.opt.refine_shrink = o.at("refine_shrink").get<double>();
    if (o.contains("multistarts")) config.opt.multistarts = o.at("multistarts").get<int>();
    if (o.contains("feasibility_tol"))
      config.opt.feasibility_tol = o.at("feasibility_tol").get<double>();
  }

  CurveSpec base;
  apply_curve_json(base, doc);
  if (doc.contains("curves")) {
    for (const json& c : doc.at("curves")) {
      CurveSpec curve = base;
      apply_curve_json(curve, c);
      config.curves.push_back(std::move(curve));
    }
  } else {
    config.curves.push_back(base);
  }
  return config;
}

struct SweepRow {
  double loss_db = 0.0;
  double eta = 0.0;
  std::optional<mbqkd::SecurityResult> result;
  double rate_ref_per_pulse = 0.0;
  std::string status = "ok";
};

SweepRow evaluate_point(const CurveSpec& curve, double loss_db,
                        const mbqkd::OptimizerConfig& opt) {
  SweepRow row;
  row.loss_db = loss_db;
  row.eta = mbqkd::loss_db_to_eta(loss_db);
  try {
    mbqkd::SecurityResult r;
    if (curve.protocol == "mdiqkd") {
      const mbqkd::MdiChannelParams ch{row.eta, curve.dark};
      if (curve.source == "single-photon")
        r = mbqkd::key_rate(mbqkd::mdiqkd_stats(ch), opt);
      else
        r = mbqkd::infinite_decoy_rate(ch, curve.decoy, opt);
    } else if (curve.protocol == "bb84") {
      const mbqkd::Bb84ChannelParams ch{row.eta, curve.pd, curve.mis_a, curve.mis_b,
                                        curve.mis_c};
      if (curve.source == "single-photon") {
        const auto table =
            curve.from_states ? mbqkd::bb84_stats_from_states(ch) : mbqkd::bb84_stats(ch);
        r = mbqkd::key_rate(table, opt);
      } else if (curve.decoy_mode == "three") {
        r = mbqkd::three_decoy_rate(ch, curve.decoy, opt);
      } else {
        r = mbqkd::infinite_decoy_rate(ch, curve.decoy, opt);
      }
    } else {
      throw mbqkd::ValidationError("unknown protocol: " + curve.protocol);
    }
    // Trusted-source benchmark on the same statistics: 1 - 2 H(e_b).
    row.rate_ref_per_pulse =
        r.gain * std::max(0.0, 1.0 - 2.0 * mbqkd::binary_entropy(std::min(r.e_b, 0.5)));
    row.result = std::move(r);
  } catch (const mbqkd::InfeasibleError&) {
    row.status = "infeasible";
  } catch (const mbqkd::NoClicksError&) {
    row.status = "no-clicks";
  }
  return row;
}

std::string sweep_csv(const CurveSpec& curve, const SweepConfig& config) {
  std::vector<double> losses;
  for (double l = config.loss_start; l <= config.loss_stop + 1e-9; l += config.loss_step)
    losses.push_back(l);

  std::vector<SweepRow> rows(losses.size());
  mbqkd::detail::parallel_for(losses.size(), [&](std::size_t i) {
    rows[i] = evaluate_point(curve, losses[i], config.opt);
  });

  std::ostringstream csv;
  csv << "loss_db,eta,e_b,epsilon,e_p,gain,rate_per_pulse,boundary_hit,"
         "rate_per_sifted_bit,rate_ref_per_pulse,status\n";
  for (const auto& row : rows) {
    csv << fmt(row.loss_db) << ',' << fmt(row.eta) << ',';
    if (row.result) {
      const auto& r = *row.result;
      csv << fmt(r.e_b) << ',' << fmt(r.epsilon) << ',' << fmt(r.e_p) << ','
          << fmt(r.gain) << ',' << fmt(r.rate_per_pulse) << ','
          << (r.boundary_hit ? 1 : 0) << ',' << fmt(r.rate_per_sifted_bit) << ','
          << fmt(row.rate_ref_per_pulse) << ',' << row.status << '\n';
    } else {
      csv << ",,,,0,0,,," << row.status << '\n';
    }
  }
  return csv.str();
}

std::string sanitize_label(const std::string& label) {
  std::string out;
  for (char c : label)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out.empty() ? "curve" : out;
}

// ---------------------------------------------------------------------------

int run_simulate(const std::string& protocol, std::optional<double> eta,
                 std::optional<double> loss_db, double dark, double pd, double mis_a,
                 double mis_b, double mis_c, bool from_states,
                 const std::string& pulses_text, const std::string& out_path) {
  if (eta.has_value() == loss_db.has_value())
    throw mbqkd::ValidationError("give exactly one of --eta and --loss-db");
  const double eff = eta ? *eta : mbqkd::loss_db_to_eta(*loss_db);

  mbqkd::ConditionalStats table;
  if (protocol == "mdiqkd") {
    table = mbqkd::mdiqkd_stats({eff, dark});
  } else {
    const mbqkd::Bb84ChannelParams ch{eff, pd, mis_a, mis_b, mis_c};
    table = from_states ? mbqkd::bb84_stats_from_states(ch) : mbqkd::bb84_stats(ch);
  }
  std::optional<std::uint64_t> n_pulses;
  if (!pulses_text.empty()) {
    const double n = parse_pulses(pulses_text);
    if (std::isfinite(n)) n_pulses = static_cast<std::uint64_t>(n);
  }
  write_text(out_path, mbqkd::stats_to_json(table, n_pulses));
  return kExitOk;
}

int run_analyze(const std::string& stats_path, bool symmetric, bool diagnostics,
                const mbqkd::OptimizerConfig& opt, const std::string& out_path) {
  const mbqkd::StatsFile file = mbqkd::read_stats_file(stats_path);
  mbqkd::validate_or_throw(file.stats);
  const auto method = symmetric ? mbqkd::EpsilonMethod::symmetric_if_applicable
                                : mbqkd::EpsilonMethod::full;
  const mbqkd::SecurityResult result = mbqkd::key_rate(file.stats, opt, method);
  write_text(out_path, security_result_to_json(result, diagnostics).dump(2) + "\n");
  return kExitOk;
}

int run_sweep(const SweepConfig& config, const std::string& out_path,
              const std::string& out_dir) {
  if (config.loss_step <= 0.0)
    throw mbqkd::ValidationError("loss step must be positive");
  if (config.loss_start > config.loss_stop)
    throw mbqkd::ValidationError("loss range start exceeds stop");

  if (config.curves.size() == 1 && !out_path.empty()) {
    write_text(out_path, sweep_csv(config.curves.front(), config));
    return kExitOk;
  }
  if (!out_path.empty())
    throw mbqkd::ValidationError("--out needs a single curve; use --out-dir");
  const std::string dir = out_dir.empty() ? "." : out_dir;
  std::filesystem::create_directories(dir);
  for (const auto& curve : config.curves) {
    const std::string path =
        dir + "/" + config.out_prefix + "-" + sanitize_label(curve.label) + ".csv";
    write_text(path, sweep_csv(curve, config));
    std::cout << path << "\n";
  }
  return kExitOk;
}

int run_attack_audit(std::uint64_t trials, std::uint64_t seed, int eve_ancilla,
                     const std::string& replay_path, const std::string& failures_dir,
                     const mbqkd::OptimizerConfig& opt) {
  if (!replay_path.empty()) {
    std::ifstream in(replay_path);
    if (!in) throw mbqkd::ValidationError("cannot open replay file: " + replay_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const mbqkd::AttackInstance attack = mbqkd::attack_from_json(buf.str());
    const mbqkd::PhaseErrorReport report = mbqkd::replay_attack(attack, opt);
    json doc;
    doc["e_p_actual"] = report.e_p_actual;
    doc["e_b_actual"] = report.e_b_actual;
    doc["bound"] = report.bound;
    doc["sound"] = report.sound;
    std::cout << doc.dump(2) << "\n";
    return report.sound ? kExitOk : kExitAuditViolation;
  }

  const mbqkd::AuditReport report = mbqkd::soundness_audit(trials, seed, opt, eve_ancilla);
  json doc;
  doc["trials"] = report.trials;
  doc["passes"] = report.passes;
  doc["failures"] = report.failures;
  doc["worst_margin"] = report.worst_margin;
  json failures = json::array();
  for (const auto& f : report.failure_artifacts) {
    json entry;
    entry["trial"] = f.trial;
    entry["reason"] = f.reason;
    if (!failures_dir.empty()) {
      std::filesystem::create_directories(failures_dir);
      const std::string path =
          failures_dir + "/attack-failure-" + std::to_string(f.trial) + ".json";
      write_text(path, f.artifact_json);
      entry["artifact"] = path;
    }
    failures.push_back(std::move(entry));
  }
  doc["failures_detail"] = std::move(failures);
  std::cout << doc.dump(2) << "\n";
  return report.failures == 0 ? kExitOk : kExitAuditViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key-rate analysis for MDIQKD and BB84 with uncharacterized qubit "
               "sources, from mismatched-basis statistics"};
  app.require_subcommand(1);

  // --- simulate ---
  auto* simulate = app.add_subcommand("simulate", "Generate a statistics file from a "
                                                  "channel model");
  std::string sim_protocol = "mdiqkd";
  simulate->add_option("--protocol", sim_protocol)
      ->check(CLI::IsMember({"mdiqkd", "bb84"}));
  std::optional<double> sim_eta, sim_loss;
  auto* sim_eta_opt = simulate->add_option("--eta", sim_eta, "transmission efficiency");
  simulate->add_option("--loss-db", sim_loss, "transmission loss in dB")
      ->excludes(sim_eta_opt);
  double sim_dark = 0.0, sim_pd = 0.0, sim_a = 0.0, sim_b = 0.0, sim_c = 0.0;
  simulate->add_option("--dark", sim_dark, "MDIQKD dark-count probability");
  simulate->add_option("--pd", sim_pd, "BB84 dark-count probability");
  simulate->add_option("--mis-a", sim_a, "misalignment a (degrees)");
  simulate->add_option("--mis-b", sim_b, "misalignment b (degrees)");
  simulate->add_option("--mis-c", sim_c, "misalignment c (degrees)");
  bool sim_from_states = false;
  simulate->add_flag("--from-states", sim_from_states,
                     "derive the BB84 table from the misaligned states");
  std::string sim_pulses, sim_out = "-";
  simulate->add_option("--pulses", sim_pulses, "pulse count to embed (or \"inf\")");
  simulate->add_option("--out", sim_out, "output path (- for stdout)");

  // --- shared optimizer flags ---
  mbqkd::OptimizerConfig opt;
  auto add_optimizer_flags = [&opt](CLI::App* cmd) {
    cmd->add_option("--cmax", opt.c_max, "search box upper bound");
    cmd->add_option("--grid", opt.coarse_grid, "coarse grid points per axis");
    cmd->add_option("--refine-rounds", opt.refine_rounds);
    cmd->add_option("--shrink", opt.refine_shrink);
    cmd->add_option("--multistarts", opt.multistarts);
    cmd->add_option("--ftol", opt.feasibility_tol);
  };

  // --- analyze ---
  auto* analyze = app.add_subcommand("analyze", "Compute the security result for a "
                                                "statistics file");
  std::string an_stats;
  analyze->add_option("stats", an_stats, "statistics JSON file")->required();
  bool an_symmetric = false, an_diag = false;
  analyze->add_flag("--symmetric", an_symmetric,
                    "use the reduced maximization when the table qualifies");
  analyze->add_flag("--diagnostics", an_diag, "emit optimizer diagnostics");
  std::string an_out = "-";
  analyze->add_option("--out", an_out, "output path (- for stdout)");
  add_optimizer_flags(analyze);

  // --- sweep ---
  auto* sweep = app.add_subcommand("sweep", "Loss sweep to CSV");
  std::string sw_config, sw_out, sw_out_dir;
  sweep->add_option("--config", sw_config, "JSON sweep recipe");
  sweep->add_option("--out", sw_out, "CSV path for a single curve");
  sweep->add_option("--out-dir", sw_out_dir, "directory for multi-curve recipes");
  std::string sw_protocol, sw_source, sw_decoy_mode;
  sweep->add_option("--protocol", sw_protocol)->check(CLI::IsMember({"mdiqkd", "bb84"}));
  sweep->add_option("--source", sw_source)
      ->check(CLI::IsMember({"single-photon", "coherent"}));
  sweep->add_option("--decoy-mode", sw_decoy_mode)
      ->check(CLI::IsMember({"infinite", "three"}));
  double sw_start = 0.0, sw_stop = 40.0, sw_step = 1.0;
  sweep->add_option("--loss-start", sw_start);
  sweep->add_option("--loss-stop", sw_stop);
  sweep->add_option("--loss-step", sw_step);
  double sw_dark = 0.0, sw_pd = 0.0, sw_a = 0.0, sw_b = 0.0, sw_c = 0.0;
  sweep->add_option("--dark", sw_dark);
  sweep->add_option("--pd", sw_pd);
  sweep->add_option("--mis-a", sw_a);
  sweep->add_option("--mis-b", sw_b);
  sweep->add_option("--mis-c", sw_c);
  bool sw_from_states = false;
  sweep->add_flag("--from-states", sw_from_states);
  double sw_mu = 0.5, sw_nu = 0.1, sw_ksigma = 5.0;
  std::string sw_pulses;
  sweep->add_option("--mu", sw_mu);
  sweep->add_option("--nu", sw_nu);
  sweep->add_option("--pulses", sw_pulses);
  sweep->add_option("--ksigma", sw_ksigma);
  add_optimizer_flags(sweep);

  // --- attack-audit ---
  auto* audit = app.add_subcommand("attack-audit", "Adversarial soundness audit");
  std::uint64_t au_trials = 1000, au_seed = 7;
  audit->add_option("--trials", au_trials)->check(CLI::Range(std::uint64_t{1},
                                                             std::uint64_t{100000000}));
  audit->add_option("--seed", au_seed);
  int au_ancilla = 2;
  audit->add_option("--eve-dim", au_ancilla, "maximum ancilla dimension")
      ->check(CLI::Range(1, 16));
  std::string au_replay, au_failures_dir;
  audit->add_option("--replay", au_replay, "re-check a serialized attack instance");
  audit->add_option("--failures-dir", au_failures_dir,
                    "directory for failure artifacts");
  add_optimizer_flags(audit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed())
      return run_simulate(sim_protocol, sim_eta, sim_loss, sim_dark, sim_pd, sim_a, sim_b,
                          sim_c, sim_from_states, sim_pulses, sim_out);
    if (analyze->parsed()) return run_analyze(an_stats, an_symmetric, an_diag, opt, an_out);
    if (sweep->parsed()) {
      SweepConfig config;
      if (!sw_config.empty()) config = load_sweep_config(sw_config);
      if (config.curves.empty()) config.curves.emplace_back();
      auto override_all = [&](auto set) {
        for (auto& curve : config.curves) set(curve);
      };
      if (sweep->count("--protocol"))
        override_all([&](CurveSpec& c) { c.protocol = sw_protocol; });
      if (sweep->count("--source"))
        override_all([&](CurveSpec& c) { c.source = sw_source; });
      if (sweep->count("--decoy-mode"))
        override_all([&](CurveSpec& c) { c.decoy_mode = sw_decoy_mode; });
      if (sweep->count("--loss-start")) config.loss_start = sw_start;
      if (sweep->count("--loss-stop")) config.loss_stop = sw_stop;
      if (sweep->count("--loss-step")) config.loss_step = sw_step;
      if (sweep->count("--dark")) override_all([&](CurveSpec& c) { c.dark = sw_dark; });
      if (sweep->count("--pd")) override_all([&](CurveSpec& c) { c.pd = sw_pd; });
      if (sweep->count("--mis-a")) override_all([&](CurveSpec& c) { c.mis_a = sw_a; });
      if (sweep->count("--mis-b")) override_all([&](CurveSpec& c) { c.mis_b = sw_b; });
      if (sweep->count("--mis-c")) override_all([&](CurveSpec& c) { c.mis_c = sw_c; });
      if (sweep->count("--from-states"))
        override_all([&](CurveSpec& c) { c.from_states = sw_from_states; });
      if (sweep->count("--mu")) override_all([&](CurveSpec& c) { c.decoy.mu = sw_mu; });
      if (sweep->count("--nu")) override_all([&](CurveSpec& c) { c.decoy.nu = sw_nu; });
      if (sweep->count("--pulses"))
        override_all([&](CurveSpec& c) { c.decoy.n_pulses = parse_pulses(sw_pulses); });
      if (sweep->count("--ksigma"))
        override_all([&](CurveSpec& c) { c.decoy.k_sigma = sw_ksigma; });
      if (sweep->count("--cmax")) config.opt.c_max = opt.c_max;
      if (sweep->count("--grid")) config.opt.coarse_grid = opt.coarse_grid;
      if (sweep->count("--refine-rounds")) config.opt.refine_rounds = opt.refine_rounds;
      if (sweep->count("--shrink")) config.opt.refine_shrink = opt.refine_shrink;
      if (sweep->count("--multistarts")) config.opt.multistarts = opt.multistarts;
      if (sweep->count("--ftol")) config.opt.feasibility_tol = opt.feasibility_tol;
      return run_sweep(config, sw_out, sw_out_dir);
    }
    if (audit->parsed())
      return run_attack_audit(au_trials, au_seed, au_ancilla, au_replay, au_failures_dir,
                              opt);
  } catch (const mbqkd::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const mbqkd::NoClicksError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const mbqkd::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
