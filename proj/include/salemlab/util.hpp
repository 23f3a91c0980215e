#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace salemlab {

using complexd = std::complex<double>;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Fractional part mapped into [0,1).
inline double torus_frac(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;  // guard against floor rounding at negative epsilons
  return f;
}

/// Distance from a real number to the nearest integer.
inline double dist_to_int(double x) {
  double f = x - std::nearbyint(x);
  return std::fabs(f);
}

/// Euclidean distance from a point in R^n to the nearest point of Z^n.
inline double dist_to_lattice(std::span<const double> x) {
  double s = 0.0;
  for (double c : x) {
    double d = dist_to_int(c);
    s += d * d;
  }
  return std::sqrt(s);
}

/// Volume of the Euclidean unit ball in R^n.
inline double ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

inline double sup_norm(std::span<const int64_t> v) {
  int64_t m = 0;
  for (int64_t c : v) m = std::max(m, std::abs(c));
  return static_cast<double>(m);
}

inline double euclid_norm(std::span<const int64_t> v) {
  double s = 0.0;
  for (int64_t c : v) s += static_cast<double>(c) * static_cast<double>(c);
  return std::sqrt(s);
}

inline int64_t gcd_of(std::span<const int64_t> v) {
  int64_t g = 0;
  for (int64_t c : v) g = std::gcd(g, std::abs(c));
  return g;
}

/// Slope of the least-squares line through (x_i, y_i).
double least_squares_slope(std::span<const double> xs, std::span<const double> ys);

/// Gauss-Legendre nodes/weights on [-1,1], computed once per order by Newton
/// iteration on the Legendre recurrence.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  explicit GaussLegendre(int order);

  /// Integrate f over [a,b] with `panels` equal subintervals.
  template <class F>
  double integrate(F&& f, double a, double b, int panels = 1) const {
    double total = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * h;
      const double mid = lo + 0.5 * h;
      double acc = 0.0;
      for (size_t i = 0; i < nodes.size(); ++i)
        acc += weights[i] * f(mid + 0.5 * h * nodes[i]);
      total += 0.5 * h * acc;
    }
    return total;
  }
};

const GaussLegendre& gl16();
const GaussLegendre& gl32();

/// Table of the 2N-th roots of unity e^{-2*pi*i*m/(2N)}; used for exact phase
/// evaluation at rational angles m/(2N).
struct RootTable {
  int64_t modulus;  // 2N
  std::vector<complexd> w;
  explicit RootTable(int64_t two_n);
  complexd operator()(int64_t m) const {
    m %= modulus;
    if (m < 0) m += modulus;
    return w[static_cast<size_t>(m)];
  }
};

/// Deterministic 64-bit splitmix-based generator; used instead of
/// std::uniform_real_distribution so streams are identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}
  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0,1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n).
  uint64_t next_below(uint64_t n) { return next_u64() % n; }

 private:
  uint64_t state_;
};

}  // namespace salemlab
