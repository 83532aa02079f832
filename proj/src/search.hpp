#ifndef MBQKD_SRC_SEARCH_HPP
#define MBQKD_SRC_SEARCH_HPP

// Internal: constrained maximization engine behind epsilon_max and friends.
// The four variables are the expansion coefficients (C30, C31, C'20, C'21);
// constraint rows 0-1 touch only (C30, C31) and rows 2-3 only (C'20, C'21),
// so cell-level feasibility filtering factors into two 2-D problems.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "mbqkd/errors.hpp"
#include "mbqkd/parallel.hpp"
#include "mbqkd/security.hpp"

namespace mbqkd::detail {

using Vec4 = std::array<double, 4>;

// One two-sided constraint |t - u*a^2 - w*b^2| <= 2*sqrt(u*w)*a*b with the
// table values t, u, w known within [lo,hi] (point tables have lo == hi).
// The row is treated as satisfiable if it holds for some table values in
// the box, which widens (never shrinks) the feasible region.
struct ConstraintRow {
  double t_lo = 0, t_hi = 0;
  double u_lo = 0, u_hi = 0;
  double w_lo = 0, w_hi = 0;
  double sqrt_uw_hi = 0;

  static ConstraintRow point(double t, double u, double w) {
    return {t, t, u, u, w, w, std::sqrt(u * w)};
  }
  static ConstraintRow interval(double tl, double th, double ul, double uh, double wl,
                                double wh) {
    return {tl, th, ul, uh, wl, wh, std::sqrt(uh * wh)};
  }

  double violation(double a, double b) const {
    const double a2 = a * a, b2 = b * b;
    const double a_min = t_lo - u_hi * a2 - w_hi * b2;
    const double a_max = t_hi - u_lo * a2 - w_lo * b2;
    const double b_max = 2.0 * sqrt_uw_hi * a * b;
    return std::max({0.0, a_min - b_max, -a_max - b_max});
  }

  // Sound relaxation over [a_lo,a_hi]x[b_lo,b_hi] with non-negative bounds:
  // the middle expression is monotone decreasing in a and b, the bound
  // increasing, so corner evaluations are exact interval bounds.
  bool cell_possibly_feasible(double a_lo, double a_hi, double b_lo, double b_hi,
                              double tol) const {
    const double a_min = t_lo - u_hi * a_hi * a_hi - w_hi * b_hi * b_hi;
    const double a_max = t_hi - u_lo * a_lo * a_lo - w_lo * b_lo * b_lo;
    const double b_max = 2.0 * sqrt_uw_hi * a_hi * b_hi;
    return a_min <= b_max + tol && a_max >= -b_max - tol;
  }
};

struct ConstraintSet {
  std::array<ConstraintRow, 4> rows;  // 0,1 on vars (0,1); 2,3 on vars (2,3)

  double max_violation(const Vec4& c) const {
    double v = rows[0].violation(c[0], c[1]);
    v = std::max(v, rows[1].violation(c[0], c[1]));
    v = std::max(v, rows[2].violation(c[2], c[3]));
    v = std::max(v, rows[3].violation(c[2], c[3]));
    return v;
  }

  // Restoration objective: the max alone stalls a coordinate search when
  // several rows are violated at once, the sum does not.
  double total_violation(const Vec4& c) const {
    return rows[0].violation(c[0], c[1]) + rows[1].violation(c[0], c[1]) +
           rows[2].violation(c[2], c[3]) + rows[3].violation(c[2], c[3]);
  }

  bool pair_cell_feasible(int pair, double a_lo, double a_hi, double b_lo, double b_hi,
                          double tol) const {
    const int r = pair == 0 ? 0 : 2;
    return rows[r].cell_possibly_feasible(a_lo, a_hi, b_lo, b_hi, tol) &&
           rows[r + 1].cell_possibly_feasible(a_lo, a_hi, b_lo, b_hi, tol);
  }
};

// Products below this threshold get the adjacent zero case evaluated as
// well, with the larger value kept: the objective is discontinuous at the
// case boundaries and rounding up is the safe direction for a maximum.
constexpr double kNearZeroProduct = 1e-12;

// The general four-case objective. Interval tables enter through upper
// square roots in the numerator and a lower click sum in the denominator,
// so one struct serves both the point and the interval problem.
struct FullObjective {
  double s32 = 0, s01 = 0, s10 = 0, s00 = 0, s11 = 0;  // sqrt of table values
  double inv_den = 0;                                  // 1 / (2 * click sum)
  double one_minus_eb = 0;

  double eval_case(double S, double cross, double prod1, double prod2, bool z1,
                   bool z2) const {
    if (z1 && z2) return one_minus_eb;
    if (z2) {
      const double num = S + s11 * cross;
      return num == 0.0 ? 0.0 : num * num * inv_den / (prod1 * prod1);
    }
    if (z1) {
      const double num = S + s00 * cross;
      return num == 0.0 ? 0.0 : num * num * inv_den / (prod2 * prod2);
    }
    const double num1 = S + s11 * cross;
    const double num2 = S + s00 * cross;
    const double t1 = num1 == 0.0 ? 0.0 : num1 * num1 * inv_den / (prod1 * prod1);
    const double t2 = num2 == 0.0 ? 0.0 : num2 * num2 * inv_den / (prod2 * prod2);
    return std::min(t1, t2);
  }

  double eval(const Vec4& c) const {
    const double prod1 = c[0] * c[2];
    const double prod2 = c[1] * c[3];
    const double S = s32 + s01 * c[0] * c[3] + s10 * c[1] * c[2];
    const double cross = std::abs(prod1 - prod2);
    double f = eval_case(S, cross, prod1, prod2, prod1 == 0.0, prod2 == 0.0);
    const bool near1 = prod1 < kNearZeroProduct;
    const bool near2 = prod2 < kNearZeroProduct;
    if ((near1 && prod1 != 0.0) || (near2 && prod2 != 0.0))
      f = std::max(f, eval_case(S, cross, prod1, prod2, near1, near2));
    return f;
  }
};

// Reduced objective for tables satisfying the symmetric identities.
struct SymmetricObjective {
  double s_ebp = 0, s_eb = 0, s_1meb = 0;  // sqrt(e'_b), sqrt(e_b), sqrt(1-e_b)
  double one_minus_eb = 0;

  double eval_case(double num, double prod1, double prod2, bool z1, bool z2) const {
    if (z1 && z2) return one_minus_eb;
    const double m = std::max(z1 ? 0.0 : prod1 * prod1, z2 ? 0.0 : prod2 * prod2);
    return num == 0.0 ? 0.0 : num * num / (4.0 * m);
  }

  double eval(const Vec4& c) const {
    const double prod1 = c[0] * c[2];
    const double prod2 = c[1] * c[3];
    const double num = s_ebp + s_eb * (c[0] * c[3] + c[1] * c[2]) +
                       s_1meb * std::abs(prod1 - prod2);
    double f = eval_case(num, prod1, prod2, prod1 == 0.0, prod2 == 0.0);
    const bool near1 = prod1 < kNearZeroProduct;
    const bool near2 = prod2 < kNearZeroProduct;
    if ((near1 && prod1 != 0.0) || (near2 && prod2 != 0.0))
      f = std::max(f, eval_case(num, prod1, prod2, near1, near2));
    return f;
  }
};

struct SearchCandidate {
  double f = -std::numeric_limits<double>::infinity();
  Vec4 c{};
};

// Larger objective wins; exact ties break toward lexicographically smaller
// coordinates so reruns and thread counts cannot change the result.
inline bool better(const SearchCandidate& a, const SearchCandidate& b) {
  if (a.f != b.f) return a.f > b.f;
  return a.c < b.c;
}

struct SearchOutcome {
  SearchCandidate best;
  bool boundary_hit = false;
  OptimizerDiagnostics diagnostics;
};

template <class Objective>
class BoxSearch {
public:
  BoxSearch(const Objective& obj, const ConstraintSet& cons, const OptimizerConfig& cfg)
      : obj_(obj), cons_(cons), cfg_(cfg) {}

  SearchOutcome run() {
    validate_or_throw(cfg_);
    coarse_cell_ = cfg_.c_max / (cfg_.coarse_grid - 1);

    Box full{{0.0, 0.0, 0.0, 0.0}, {cfg_.c_max, cfg_.c_max, cfg_.c_max, cfg_.c_max}};
    ScanResult s0 = scan(full, /*collect_pool=*/true);
    diag_.feasible_cells = s0.cells;
    diag_.evaluations += s0.evals;
    if (s0.cells == 0)
      throw InfeasibleError(
          "the statistics admit no expansion coefficients inside the search box");

    SearchCandidate incumbent = s0.best;
    diag_.incumbent_history.push_back(incumbent.f);

    for (int r = 1; r <= cfg_.refine_rounds; ++r) {
      const double width = cfg_.c_max * std::pow(cfg_.refine_shrink, r);
      const Box box = centered_box(incumbent.c, width);
      ScanResult sr = scan(box, /*collect_pool=*/false);
      diag_.evaluations += sr.evals;
      if (sr.cells > 0 && better(sr.best, incumbent)) incumbent = sr.best;
      diag_.incumbent_history.push_back(incumbent.f);
    }

    // Polish: restore feasibility, then climb within the feasible set.
    std::vector<Vec4> starts;
    starts.push_back(incumbent.c);
    if (s0.least_violation.f > -std::numeric_limits<double>::infinity())
      starts.push_back(s0.least_violation.c);
    for (const auto& cand : s0.pool) {
      if (static_cast<int>(starts.size()) >= cfg_.multistarts + 2) break;
      starts.push_back(cand.c);
    }

    std::optional<SearchCandidate> final_best;
    for (const auto& start : starts) {
      ++diag_.polish_starts;
      const auto restored = restore(start);
      if (!restored) continue;
      const Vec4 q = climb(*restored);
      const SearchCandidate cand{obj_.eval(q), q};
      if (!final_best || better(cand, *final_best)) final_best = cand;
    }
    if (!final_best)
      throw InfeasibleError(
          "no feasible expansion coefficients reachable within the search box");

    diag_.incumbent_history.push_back(final_best->f);
    diag_.max_violation_at_argmax = cons_.max_violation(final_best->c);

    SearchOutcome out;
    out.best = *final_best;
    for (double v : out.best.c)
      if (v > cfg_.c_max - coarse_cell_) out.boundary_hit = true;
    out.diagnostics = std::move(diag_);
    return out;
  }

private:
  struct Box {
    Vec4 lo, hi;
  };

  struct ScanResult {
    SearchCandidate best;
    SearchCandidate least_violation;  // f field holds -violation
    std::vector<SearchCandidate> pool;
    std::uint64_t cells = 0;
    std::uint64_t evals = 0;
  };

  Box centered_box(const Vec4& center, double width) const {
    Box b;
    for (int i = 0; i < 4; ++i) {
      b.lo[i] = std::max(0.0, std::min(center[i] - width / 2.0, cfg_.c_max - width));
      b.hi[i] = std::min(cfg_.c_max, b.lo[i] + width);
    }
    return b;
  }

  static std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    g.front() = lo;
    g.back() = hi;
    return g;
  }

  // Feasible 2-D cells for one variable pair, as index pairs into the grid.
  std::vector<std::pair<int, int>> feasible_cells(int pair, const std::vector<double>& ga,
                                                  const std::vector<double>& gb) const {
    std::vector<std::pair<int, int>> cells;
    const int n = static_cast<int>(ga.size());
    for (int i = 0; i + 1 < n; ++i)
      for (int j = 0; j + 1 < n; ++j)
        if (cons_.pair_cell_feasible(pair, ga[i], ga[i + 1], gb[j], gb[j + 1],
                                     cfg_.feasibility_tol))
          cells.emplace_back(i, j);
    return cells;
  }

  // Evaluate a cell through its center plus zero-snapped variants for every
  // coordinate whose cell touches zero: the objective jumps on the zero
  // manifolds, so the snapped points must be ranked explicitly.
  template <class Visit>
  void visit_cell_points(const Vec4& lo, const Vec4& hi, Visit&& visit) const {
    Vec4 center;
    int snappable[4];
    int n_snap = 0;
    for (int i = 0; i < 4; ++i) {
      center[i] = 0.5 * (lo[i] + hi[i]);
      if (lo[i] == 0.0) snappable[n_snap++] = i;
    }
    visit(center);
    for (int mask = 1; mask < (1 << n_snap); ++mask) {
      Vec4 p = center;
      for (int k = 0; k < n_snap; ++k)
        if (mask & (1 << k)) p[snappable[k]] = 0.0;
      visit(p);
    }
  }

  ScanResult scan(const Box& box, bool collect_pool) const {
    const int m = cfg_.coarse_grid;
    const auto g0 = linspace(box.lo[0], box.hi[0], m);
    const auto g1 = linspace(box.lo[1], box.hi[1], m);
    const auto g2 = linspace(box.lo[2], box.hi[2], m);
    const auto g3 = linspace(box.lo[3], box.hi[3], m);

    const auto cells_a = feasible_cells(0, g0, g1);
    const auto cells_b = feasible_cells(1, g2, g3);

    ScanResult result;
    result.cells = static_cast<std::uint64_t>(cells_a.size()) * cells_b.size();
    if (result.cells == 0) return result;

    // Fixed chunking (independent of the thread count) so that merging
    // per-chunk results in chunk order is reproducible.
    const std::size_t n_chunks = std::min<std::size_t>(64, cells_a.size());
    std::vector<ScanResult> parts(n_chunks);
    const double sep = 2.0 * (box.hi[0] - box.lo[0]) / (m - 1);

    parallel_for(n_chunks, [&](std::size_t chunk) {
      ScanResult& part = parts[chunk];
      const std::size_t begin = cells_a.size() * chunk / n_chunks;
      const std::size_t end = cells_a.size() * (chunk + 1) / n_chunks;
      for (std::size_t ia = begin; ia < end; ++ia) {
        const auto [i, j] = cells_a[ia];
        for (const auto& [k, l] : cells_b) {
          const Vec4 lo{g0[i], g1[j], g2[k], g3[l]};
          const Vec4 hi{g0[i + 1], g1[j + 1], g2[k + 1], g3[l + 1]};
          visit_cell_points(lo, hi, [&](const Vec4& p) {
            ++part.evals;
            const SearchCandidate cand{obj_.eval(p), p};
            if (better(cand, part.best)) part.best = cand;
            if (collect_pool) {
              pool_insert(part.pool, cand, sep);
              const SearchCandidate lv{-cons_.max_violation(p), p};
              if (better(lv, part.least_violation)) part.least_violation = lv;
            }
          });
        }
      }
    });

    for (const auto& part : parts) {
      result.evals += part.evals;
      if (better(part.best, result.best)) result.best = part.best;
      if (better(part.least_violation, result.least_violation))
        result.least_violation = part.least_violation;
      if (collect_pool)
        for (const auto& cand : part.pool) pool_insert(result.pool, cand, sep);
    }
    return result;
  }

  // Keep up to `multistarts` candidates, best first, separated by at least
  // `sep` in the max norm so the polish stage starts from distinct basins.
  void pool_insert(std::vector<SearchCandidate>& pool, const SearchCandidate& cand,
                   double sep) const {
    for (auto& entry : pool) {
      double dist = 0.0;
      for (int i = 0; i < 4; ++i) dist = std::max(dist, std::abs(entry.c[i] - cand.c[i]));
      if (dist < sep) {
        if (better(cand, entry)) entry = cand;
        return;
      }
    }
    if (static_cast<int>(pool.size()) < cfg_.multistarts) {
      pool.push_back(cand);
      return;
    }
    auto worst = std::max_element(pool.begin(), pool.end(),
                                  [](const SearchCandidate& a, const SearchCandidate& b) {
                                    return better(a, b);  // max_element finds the worst
                                  });
    if (better(cand, *worst)) *worst = cand;
  }

  // Pattern search driving the constraint violations to zero.
  std::optional<Vec4> restore(Vec4 p) const {
    if (cons_.max_violation(p) <= cfg_.feasibility_tol) return p;
    double v = cons_.total_violation(p);
    const double min_step = 1e-11 * std::max(1.0, cfg_.c_max);
    for (double step = coarse_cell_; step > min_step; step *= 0.5) {
      for (int sweep = 0; sweep < 200; ++sweep) {
        bool improved = false;
        for (int i = 0; i < 4; ++i) {
          for (const double delta : {step, -step}) {
            Vec4 q = p;
            q[i] = std::clamp(p[i] + delta, 0.0, cfg_.c_max);
            if (q[i] == p[i]) continue;
            const double vq = cons_.total_violation(q);
            if (vq < v) {
              p = q;
              v = vq;
              improved = true;
            }
          }
          if (p[i] != 0.0 && p[i] <= step) {
            Vec4 q = p;
            q[i] = 0.0;
            const double vq = cons_.total_violation(q);
            if (vq <= v) {
              p = q;
              v = vq;
              improved = true;
            }
          }
        }
        if (v == 0.0) return p;
        if (!improved) break;
      }
    }
    if (cons_.max_violation(p) <= cfg_.feasibility_tol) return p;
    return std::nullopt;
  }

  // Pattern search maximizing the objective over feasible points; includes
  // zero-snap moves because the objective is discontinuous at zero products.
  Vec4 climb(Vec4 p) const {
    double f = obj_.eval(p);
    for (double step = coarse_cell_; step > 3e-11; step *= 0.5) {
      for (int sweep = 0; sweep < 200; ++sweep) {
        bool improved = false;
        for (int i = 0; i < 4; ++i) {
          for (const double delta : {step, -step}) {
            Vec4 q = p;
            q[i] = std::clamp(p[i] + delta, 0.0, cfg_.c_max);
            if (q[i] == p[i]) continue;
            if (cons_.max_violation(q) > cfg_.feasibility_tol) continue;
            const double fq = obj_.eval(q);
            if (fq > f) {
              p = q;
              f = fq;
              improved = true;
            }
          }
          if (p[i] != 0.0 && p[i] <= step) {
            Vec4 q = p;
            q[i] = 0.0;
            if (cons_.max_violation(q) <= cfg_.feasibility_tol) {
              const double fq = obj_.eval(q);
              if (fq > f) {
                p = q;
                f = fq;
                improved = true;
              }
            }
          }
        }
        if (!improved) break;
      }
    }
    return p;
  }

  const Objective& obj_;
  const ConstraintSet& cons_;
  OptimizerConfig cfg_;
  double coarse_cell_ = 0.0;
  OptimizerDiagnostics diag_;
};

}  // namespace mbqkd::detail

#endif
