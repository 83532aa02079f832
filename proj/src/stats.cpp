#include "mbqkd/stats.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "mbqkd/errors.hpp"

namespace mbqkd {

namespace {

std::string entry_name(int x, int y) {
  return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
}

}  // namespace

const std::array<std::pair<int, int>, 9>& ConditionalStats::required_entries() {
  static const std::array<std::pair<int, int>, 9> req = {{
      {0, 0}, {0, 1}, {1, 0}, {1, 1}, {3, 2}, {3, 0}, {3, 1}, {0, 2}, {1, 2},
  }};
  return req;
}

int ConditionalStats::index(int x, int y) {
  if (x < 0 || x > 3 || y < 0 || y > 3)
    throw ValidationError("statistics index out of range: " + entry_name(x, y));
  return 4 * x + y;
}

bool ConditionalStats::has(int x, int y) const { return present_[index(x, y)]; }

double ConditionalStats::p1(int x, int y) const {
  const int i = index(x, y);
  if (!present_[i]) throw ValidationError("missing statistics entry " + entry_name(x, y));
  return p1_[i];
}

void ConditionalStats::set(int x, int y, double p) {
  const int i = index(x, y);
  p1_[i] = p;
  present_[i] = true;
}

void ConditionalStats::clear(int x, int y) { present_[index(x, y)] = false; }

StatsIntervals StatsIntervals::from_point(const ConditionalStats& s) {
  StatsIntervals out;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      if (s.has(x, y)) out.set(x, y, s.p1(x, y), s.p1(x, y));
  return out;
}

StatsIntervals StatsIntervals::from_fluctuation(const ConditionalStats& s, double n,
                                                double k_sigma) {
  StatsIntervals out;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      if (s.has(x, y)) {
        const auto [lo, hi] = fluctuation_interval(s.p1(x, y), n, k_sigma);
        out.set(x, y, lo, hi);
      }
  return out;
}

bool StatsIntervals::has(int x, int y) const { return lo_.has(x, y); }
double StatsIntervals::lo(int x, int y) const { return lo_.p1(x, y); }
double StatsIntervals::hi(int x, int y) const { return hi_.p1(x, y); }

void StatsIntervals::set(int x, int y, double lo, double hi) {
  if (!(lo <= hi))
    throw ValidationError("interval bounds inverted at " + entry_name(x, y));
  lo_.set(x, y, lo);
  hi_.set(x, y, hi);
}

std::vector<std::string> validate(const ConditionalStats& stats) {
  std::vector<std::string> problems;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      if (stats.has(x, y)) {
        const double p = stats.p1(x, y);
        if (!(p >= 0.0 && p <= 1.0))
          problems.push_back("entry " + entry_name(x, y) + " out of range: " +
                             std::to_string(p));
      }
  for (const auto& [x, y] : ConditionalStats::required_entries())
    if (!stats.has(x, y))
      problems.push_back("missing required entry " + entry_name(x, y));
  return problems;
}

void validate_or_throw(const ConditionalStats& stats) {
  const auto problems = validate(stats);
  if (problems.empty()) return;
  std::string joined = "invalid statistics table:";
  for (const auto& p : problems) joined += " " + p + ";";
  throw ValidationError(joined);
}

std::vector<std::string> validate(const StatsIntervals& intervals) {
  std::vector<std::string> problems;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      if (intervals.has(x, y)) {
        const double lo = intervals.lo(x, y), hi = intervals.hi(x, y);
        if (!(lo >= 0.0 && lo <= hi && hi <= 1.0))
          problems.push_back("interval at " + entry_name(x, y) + " invalid: [" +
                             std::to_string(lo) + "," + std::to_string(hi) + "]");
      }
  for (const auto& [x, y] : ConditionalStats::required_entries())
    if (!intervals.has(x, y))
      problems.push_back("missing required entry " + entry_name(x, y));
  return problems;
}

void validate_or_throw(const StatsIntervals& intervals) {
  const auto problems = validate(intervals);
  if (problems.empty()) return;
  std::string joined = "invalid statistics intervals:";
  for (const auto& p : problems) joined += " " + p + ";";
  throw ValidationError(joined);
}

bool is_symmetric_case(const ConditionalStats& stats, double tol) {
  validate_or_throw(stats);
  const double p00 = stats.p1(0, 0), p11 = stats.p1(1, 1);
  const double p01 = stats.p1(0, 1), p10 = stats.p1(1, 0);
  if (std::abs(p00 - p11) > tol) return false;
  if (std::abs(p01 - p10) > tol) return false;
  const double cross = (p00 + p01) / 2.0;
  static constexpr std::array<std::pair<int, int>, 4> cross_entries = {{
      {3, 0}, {3, 1}, {0, 2}, {1, 2},
  }};
  for (const auto& [x, y] : cross_entries)
    if (std::abs(stats.p1(x, y) - cross) > tol) return false;
  return true;
}

std::pair<double, double> fluctuation_interval(double p_hat, double n, double k_sigma) {
  if (!(p_hat >= 0.0 && p_hat <= 1.0))
    throw ValidationError("frequency out of [0,1]: " + std::to_string(p_hat));
  if (!(n > 0.0)) throw ValidationError("pulse count must be positive");
  if (k_sigma < 0.0) throw ValidationError("sigma multiplier must be non-negative");
  if (std::isinf(n)) return {p_hat, p_hat};
  const double half = k_sigma * std::sqrt(p_hat * (1.0 - p_hat) / n);
  return {std::max(0.0, p_hat - half), std::min(1.0, p_hat + half)};
}

StatsFile parse_stats_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("statistics file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("statistics file must be a JSON object");
  if (!doc.contains("p1") || !doc["p1"].is_object())
    throw ValidationError("statistics file lacks a \"p1\" object");

  StatsFile out;
  for (const auto& [key, value] : doc["p1"].items()) {
    int x = -1, y = -1;
    char comma = 0;
    std::istringstream is(key);
    if (!(is >> x >> comma >> y) || comma != ',' || !is.eof() || x < 0 || x > 3 ||
        y < 0 || y > 3)
      throw ValidationError("bad entry key \"" + key + "\" in \"p1\" (expect \"x,y\")");
    if (!value.is_number())
      throw ValidationError("entry \"" + key + "\" is not a number");
    out.stats.set(x, y, value.get<double>());
  }
  if (doc.contains("n_pulses")) {
    const auto& n = doc["n_pulses"];
    if (!n.is_number_unsigned() || n.get<std::uint64_t>() == 0)
      throw ValidationError("\"n_pulses\" must be a positive integer");
    out.n_pulses = n.get<std::uint64_t>();
  }
  return out;
}

std::string stats_to_json(const ConditionalStats& stats,
                          std::optional<std::uint64_t> n_pulses) {
  nlohmann::json p1 = nlohmann::json::object();
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      if (stats.has(x, y))
        p1[std::to_string(x) + "," + std::to_string(y)] = stats.p1(x, y);
  nlohmann::json doc;
  doc["p1"] = std::move(p1);
  if (n_pulses) doc["n_pulses"] = *n_pulses;
  return doc.dump(2) + "\n";
}

StatsFile read_stats_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open statistics file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_stats_json(buf.str());
}

void write_stats_file(const std::string& path, const ConditionalStats& stats,
                      std::optional<std::uint64_t> n_pulses) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open output file: " + path);
  out << stats_to_json(stats, n_pulses);
  if (!out) throw ValidationError("failed writing statistics file: " + path);
}

}  // namespace mbqkd
