#ifndef MBQKD_STATS_HPP
#define MBQKD_STATS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mbqkd {

/// Conditional announcement statistics p(z|x,y) for encodings x,y in 0..3.
/// Only p(1|x,y) is stored; p(0|x,y) = 1 - p(1|x,y). Entries may be absent:
/// the security bound consumes exactly nine of the sixteen, and tables from
/// partial experiments need not carry the rest.
class ConditionalStats {
public:
  // Entries the phase-error bound needs: the four matched basis-0 pairs,
  // the basis-1 pair (3,2), and the four cross-basis pairs.
  static const std::array<std::pair<int, int>, 9>& required_entries();

  bool has(int x, int y) const;
  double p1(int x, int y) const;  // throws ValidationError if absent
  double p0(int x, int y) const { return 1.0 - p1(x, y); }
  void set(int x, int y, double p);
  void clear(int x, int y);

private:
  static int index(int x, int y);
  std::array<double, 16> p1_{};     // valid only where present_ is set
  std::array<bool, 16> present_{};  // default false
};

/// Interval-valued statistics table: lo/hi bounds per entry, used to feed
/// statistical-fluctuation widths through the deviation maximization.
class StatsIntervals {
public:
  static StatsIntervals from_point(const ConditionalStats& s);
  // Widens every present entry of s with fluctuation_interval(p, n, k).
  static StatsIntervals from_fluctuation(const ConditionalStats& s, double n, double k_sigma);

  bool has(int x, int y) const;
  double lo(int x, int y) const;
  double hi(int x, int y) const;
  void set(int x, int y, double lo, double hi);

private:
  ConditionalStats lo_;
  ConditionalStats hi_;
};

/// Structural validation: every present entry in [0,1] and all nine
/// required entries present. Returns human-readable problems; empty = ok.
std::vector<std::string> validate(const ConditionalStats& stats);
void validate_or_throw(const ConditionalStats& stats);

std::vector<std::string> validate(const StatsIntervals& intervals);
void validate_or_throw(const StatsIntervals& intervals);

/// True iff the table satisfies the symmetric-implementation identities
/// within absolute tolerance tol: p(1|0,0)=p(1|1,1), p(1|0,1)=p(1|1,0), and
/// every cross-basis entry equals (p(1|0,0)+p(1|0,1))/2.
bool is_symmetric_case(const ConditionalStats& stats, double tol);

/// Normal-approximation confidence interval for a binomial frequency:
/// p_hat -/+ k_sigma*sqrt(p_hat(1-p_hat)/n), clamped to [0,1].
/// n may be infinity (zero width). n <= 0 is an error.
std::pair<double, double> fluctuation_interval(double p_hat, double n, double k_sigma);

/// On-disk statistics document: the table plus an optional pulse count for
/// fluctuation analysis.
struct StatsFile {
  ConditionalStats stats;
  std::optional<std::uint64_t> n_pulses;
};

/// JSON object {"p1": {"x,y": value, ...}, "n_pulses": N}. Unknown top-level
/// keys are ignored on read; a missing or malformed "p1" is rejected.
StatsFile parse_stats_json(const std::string& text);
std::string stats_to_json(const ConditionalStats& stats,
                          std::optional<std::uint64_t> n_pulses = std::nullopt);

StatsFile read_stats_file(const std::string& path);
void write_stats_file(const std::string& path, const ConditionalStats& stats,
                      std::optional<std::uint64_t> n_pulses = std::nullopt);

}  // namespace mbqkd

#endif
