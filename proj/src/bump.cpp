#include "salemlab/bump.hpp"

#include <cmath>
#include <stdexcept>

namespace salemlab {

namespace {

double sinc(double z) {
  if (z == 0.0) return 1.0;
  const double pz = M_PI * z;
  return std::sin(pz) / pz;
}

/// Fejer kernel with transform max(0, 1 - |xi|/lambda).
double fejer(double lambda, double y) {
  const double s = sinc(lambda * y);
  return lambda * s * s;
}

double fejer_hat(double lambda, double xi) {
  return std::max(0.0, 1.0 - std::fabs(xi) / lambda);
}

constexpr double kSqrt2 = 1.4142135623730951;

/// Per-coordinate band-limited kernel; strictly positive, hat supported in
/// [-K, K] with value 1 at 0.
double band_kernel(double K, double y) {
  return 0.5 * (fejer(K, y) + fejer(K / kSqrt2, y));
}

double band_kernel_hat(double K, double xi) {
  return 0.5 * (fejer_hat(K, xi) + fejer_hat(K / kSqrt2, xi));
}

/// (1 - y^2)^{(m+8)/2} section integral constant: the m-dimensional slice
/// integral of the unnormalized compact bump is C_m (1-y^2)^{(m+8)/2} with
/// C_m = pi^{m/2} Gamma(5) / Gamma(m/2 + 5).
double slice_constant(int m) {
  return std::pow(M_PI, 0.5 * m) * 24.0 / std::tgamma(0.5 * m + 5.0);
}

}  // namespace

void validate(const BumpProfile& profile) {
  if (profile.dim < 1) throw std::invalid_argument("bump profile: dim must be >= 1");
  if (!(profile.width > 0.0)) throw std::invalid_argument("bump profile: width must be positive");
  if (profile.kind == BumpKind::kBandLimited && !(profile.band_limit > 0.0))
    throw std::invalid_argument("bump profile: band_limit must be positive");
}

double compact_bump_normalizer(int d) {
  return std::tgamma(0.5 * d + 5.0) / (24.0 * std::pow(M_PI, 0.5 * d));
}

double bump_value_unscaled(const BumpProfile& profile, std::span<const double> y) {
  if (static_cast<int>(y.size()) != profile.dim)
    throw std::invalid_argument("bump_value: dimension mismatch");
  if (profile.kind == BumpKind::kCompactSupport) {
    double r2 = 0.0;
    for (double c : y) r2 += c * c;
    if (r2 >= 1.0) return 0.0;
    const double u = 1.0 - r2;
    return compact_bump_normalizer(profile.dim) * u * u * u * u;
  }
  double v = 1.0;
  for (double c : y) v *= band_kernel(profile.band_limit, c);
  return v;
}

double bump_value(const BumpProfile& profile, std::span<const double> y) {
  std::vector<double> scaled(y.size());
  for (size_t k = 0; k < y.size(); ++k) scaled[k] = y[k] / profile.width;
  return bump_value_unscaled(profile, scaled);
}

double bump_hat_radial_compact(int dim, double s) {
  s = std::fabs(s);
  const int m = dim - 1;
  const double c = compact_bump_normalizer(dim) * slice_constant(m);
  const double p = 0.5 * (m + 8);
  // phi_hat(s) = c * int_{-1}^{1} cos(2 pi s y) (1-y^2)^p dy; even integrand.
  const int panels = std::max(2, static_cast<int>(std::ceil(s)));
  const double integral = gl32().integrate(
      [&](double y) { return std::cos(kTwoPi * s * y) * std::pow(1.0 - y * y, p); }, 0.0, 1.0,
      panels);
  return 2.0 * c * integral;
}

double compact_bump_slice_integral(int dim, int m, double s) {
  s = std::fabs(s);
  if (s >= 1.0) return 0.0;
  const double u = 1.0 - s * s;
  return compact_bump_normalizer(dim) * slice_constant(m) * std::pow(u, 0.5 * (m + 8));
}

double bump_hat(const BumpProfile& profile, std::span<const double> xi) {
  if (static_cast<int>(xi.size()) != profile.dim)
    throw std::invalid_argument("bump_hat: dimension mismatch");
  if (profile.kind == BumpKind::kCompactSupport) {
    double r2 = 0.0;
    for (double c : xi) r2 += c * c;
    return bump_hat_radial_compact(profile.dim, std::sqrt(r2));
  }
  double v = 1.0;
  for (double c : xi) v *= band_kernel_hat(profile.band_limit, c);
  return v;
}

double bump_sup(const BumpProfile& profile) {
  std::vector<double> origin(static_cast<size_t>(profile.dim), 0.0);
  return bump_value_unscaled(profile, origin);
}

double bump_min_on_ball(const BumpProfile& profile, double radius) {
  if (profile.kind == BumpKind::kCompactSupport) {
    if (radius >= 1.0) return 0.0;
    const double u = 1.0 - radius * radius;
    return compact_bump_normalizer(profile.dim) * u * u * u * u;
  }
  // Dense grid sample; the kernel is smooth and strictly positive, so the
  // sampled minimum is accurate to the grid scale. Shrink slightly so the
  // reported constant stays on the safe side of the true minimum.
  const int per_axis = 41;
  std::vector<double> y(static_cast<size_t>(profile.dim));
  double best = bump_sup(profile);
  int64_t count = 1;
  for (int k = 0; k < profile.dim; ++k) count *= per_axis;
  for (int64_t flat = 0; flat < count; ++flat) {
    int64_t rem = flat;
    double r2 = 0.0;
    for (int k = 0; k < profile.dim; ++k) {
      const double c = (2.0 * static_cast<double>(rem % per_axis) / (per_axis - 1) - 1.0) * radius;
      y[static_cast<size_t>(k)] = c;
      r2 += c * c;
      rem /= per_axis;
    }
    if (r2 > radius * radius) continue;
    best = std::min(best, bump_value_unscaled(profile, y));
  }
  return 0.99 * best;
}

int64_t band_limited_t_cutoff(const BumpProfile& profile, double delta_star,
                              std::span<const int64_t> q) {
  if (profile.kind != BumpKind::kBandLimited)
    throw std::invalid_argument("band_limited_t_cutoff: profile is not band-limited");
  if (!(delta_star > 0.0)) throw std::invalid_argument("band_limited_t_cutoff: bad delta_star");
  int64_t q_sup = 0;
  for (int64_t c : q) q_sup = std::max(q_sup, std::abs(c));
  if (q_sup == 0) throw std::invalid_argument("band_limited_t_cutoff: q must be nonzero");
  // Largest t with delta_star * t * q_sup < band_limit.
  const double edge = profile.band_limit / (delta_star * static_cast<double>(q_sup));
  int64_t t = static_cast<int64_t>(std::ceil(edge)) - 1;
  return std::max<int64_t>(t, 0);
}

}  // namespace salemlab
