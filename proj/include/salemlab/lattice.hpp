#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "salemlab/bump.hpp"
#include "salemlab/fourier.hpp"
#include "salemlab/measure.hpp"

namespace salemlab {

/// A(delta, Q) = {x : ||Q x|| < delta}, Euclidean distance to Z^n.
struct LatticeNeighborhood {
  int dim = 1;
  int64_t Q = 1;
  double delta = 0.1;
};

/// The slab family L_{delta,q} = {x : dist(q . x, Z) < delta} and its n-fold
/// product on [0,1]^{folds * d}.
struct LinearFormSpec {
  int d = 2;
  std::vector<int64_t> q;
  double delta = 0.1;
  int folds = 1;

  double delta_star() const { return delta / euclid_norm(q); }
};

/// The union of planes q . x in Z carrying (d-1)-dimensional surface measure;
/// total mass |q| per unit cube.
struct PlaneUnionMeasure {
  int d = 2;
  std::vector<int64_t> q;
};

void validate(const LatticeNeighborhood& nb);
void validate(const LinearFormSpec& spec);
void validate(const PlaneUnionMeasure& pm);

bool in_lattice_neighborhood(std::span<const double> x, const LatticeNeighborhood& nb);
bool in_linear_form(std::span<const double> x, const LinearFormSpec& spec);

/// Measure evaluation plus the mass of cells whose verdict could flip within
/// their own extent (zero for atomic measures; an O(N^{-1})-per-boundary-layer
/// estimate for grids counted by cell center).
struct MeasureEval {
  double value = 0.0;
  double boundary_error = 0.0;
};

MeasureEval measure_of_lattice_neighborhood(const AtomicMeasure& mu, const LatticeNeighborhood& nb);
MeasureEval measure_of_lattice_neighborhood(const GridMeasure& mu, const LatticeNeighborhood& nb);

MeasureEval measure_of_linear_form(const AtomicMeasure& mu, const LinearFormSpec& spec);
MeasureEval measure_of_linear_form(const GridMeasure& mu, const LinearFormSpec& spec);

/// Closed-form Fourier coefficient of the plane surface measure: |q| when
/// k lies on the integer ray Z q, else 0.
double plane_fourier_coefficient(const PlaneUnionMeasure& pm, const std::vector<int64_t>& k);

/// Midpoint-rule surface integral of e^{-2 pi i k . x} over L_q cap [0,1]^d
/// via the solved-coordinate parameterization; converges to the closed form
/// as mesh grows. Numerical oracle for plane_fourier_coefficient.
complexd plane_fourier_quadrature(const PlaneUnionMeasure& pm, const std::vector<int64_t>& k,
                                  int64_t mesh);

/// L_q(B_eps(x)): exact sum of spherical-cap volumes over the nearby planes.
double plane_ball_measure(const PlaneUnionMeasure& pm, std::span<const double> x, double eps);

struct AdConstants {
  double lower = 0.0;  // a
  double upper = 0.0;  // b
};

/// Empirical Ahlfors-David constants: extremes of L_q(B_eps(x)) / eps^{d-1}
/// over on-plane sample points and a log grid of radii in [eps_lo, eps_hi].
AdConstants measure_ad_constants(const PlaneUnionMeasure& pm, double eps_lo, double eps_hi,
                                 int point_samples = 32, int eps_samples = 12);

/// (phi_width * L_q)(x): convolution of the scaled bump with the plane
/// measure. Compact profiles sum exact slice integrals over the planes inside
/// the support; band-limited profiles evaluate their finite Fourier series.
double mollified_plane_density(const PlaneUnionMeasure& pm, const BumpProfile& profile,
                               std::span<const double> x);

/// Probability-normalized plane coefficients (L_q / |q|) on a frequency box,
/// exported in the common table schema with a plane provenance tag.
FourierTable plane_table(const PlaneUnionMeasure& pm, int64_t box_radius);

}  // namespace salemlab
