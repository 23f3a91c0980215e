#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "salemlab/util.hpp"

namespace salemlab {

enum class BumpKind { kCompactSupport, kBandLimited };

/// Mollifier profile phi with phi_hat(0) = 1, used scaled as phi(x / width).
///
/// compact-support: the radial polynomial bump c_d (1 - |y|^2)^4 on B_1(0).
/// band-limited: a per-coordinate product of two Fejer kernels with
/// incommensurate zero sets, so the profile is strictly positive while its
/// transform vanishes outside the sup-norm box |xi|_inf <= band_limit.
struct BumpProfile {
  BumpKind kind = BumpKind::kCompactSupport;
  double width = 0.1;  // delta_star at use sites
  int dim = 1;
  double band_limit = 2.0;  // K; only the band-limited kind uses it
};

void validate(const BumpProfile& profile);

/// Normalizer c_d making the unscaled compact bump integrate to 1.
double compact_bump_normalizer(int d);

/// phi(y / width).
double bump_value(const BumpProfile& profile, std::span<const double> y);
/// phi(y) for the unscaled profile.
double bump_value_unscaled(const BumpProfile& profile, std::span<const double> y);
/// Transform of the unscaled profile at frequency xi (real, even).
double bump_hat(const BumpProfile& profile, std::span<const double> xi);
/// Radial transform of the unscaled compact bump at |xi| = s.
double bump_hat_radial_compact(int dim, double s);

/// Slice integral int_{R^m} phi_dim(sqrt(s^2 + |u|^2)) du of the unscaled
/// compact bump; closed form. This is the per-plane contribution of the
/// mollified plane density at normal distance s.
double compact_bump_slice_integral(int dim, int m, double s);

/// |phi|_inf (attained at the origin for both kinds).
double bump_sup(const BumpProfile& profile);
/// min of the unscaled profile over the closed ball of the given radius.
/// Closed form for the compact kind, dense sampling for the band-limited one.
double bump_min_on_ball(const BumpProfile& profile, double radius);

/// Largest |t| with phi_hat(delta_star * t * q) != 0 for the band-limited
/// kind; the series over the ray sublattice truncates there exactly.
int64_t band_limited_t_cutoff(const BumpProfile& profile, double delta_star,
                              std::span<const int64_t> q);

}  // namespace salemlab
