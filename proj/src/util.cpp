#include "salemlab/util.hpp"

#include <numeric>

namespace salemlab {

double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("least_squares_slope: need >= 2 paired samples");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("least_squares_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

GaussLegendre::GaussLegendre(int order) {
  nodes.resize(order);
  weights.resize(order);
  // Newton iteration from the Chebyshev initial guess.
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    weights[i] = weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

const GaussLegendre& gl16() {
  static const GaussLegendre rule(16);
  return rule;
}

const GaussLegendre& gl32() {
  static const GaussLegendre rule(32);
  return rule;
}

RootTable::RootTable(int64_t two_n) : modulus(two_n), w(static_cast<size_t>(two_n)) {
  if (two_n <= 0) throw std::invalid_argument("RootTable: modulus must be positive");
  for (int64_t m = 0; m < two_n; ++m) {
    const double ang = -kTwoPi * static_cast<double>(m) / static_cast<double>(two_n);
    w[static_cast<size_t>(m)] = complexd(std::cos(ang), std::sin(ang));
  }
}

}  // namespace salemlab
