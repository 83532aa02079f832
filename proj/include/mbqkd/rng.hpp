#ifndef MBQKD_RNG_HPP
#define MBQKD_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace mbqkd {

// Small deterministic generator (splitmix64 core). Distributions are
// hand-rolled so that a given seed yields the same stream on every
// platform; std::normal_distribution makes no such promise.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller (fresh pair each call, second value dropped)
  double gauss() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::complex<double> gauss_complex() {
    const double re = gauss();
    const double im = gauss();
    return {re, im};
  }

  // stable sub-stream derivation, e.g. one stream per trial
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    Rng r(seed ^ (0xd1b54a32d192ed03ULL * (index + 1)));
    return r.next_u64();
  }

private:
  std::uint64_t state_;
};

}  // namespace mbqkd

#endif
