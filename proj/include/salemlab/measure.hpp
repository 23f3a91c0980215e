#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "salemlab/util.hpp"

namespace salemlab {

/// Finitely many weighted points on the torus [0,1)^d. Weights sum to 1.
struct AtomicMeasure {
  int dim = 0;
  std::vector<std::vector<double>> points;  // each of size dim, coordinates in [0,1)
  std::vector<double> weights;
  std::map<std::string, std::string> meta;

  size_t size() const { return points.size(); }
};

/// Mass array on the uniform N^d torus grid. Cell (i_1,...,i_d) is the
/// half-open cube prod [i_k/N, (i_k+1)/N); transforms treat its mass as an
/// atom at the cube center.
struct GridMeasure {
  int dim = 0;
  int64_t resolution = 0;  // N, per axis
  std::vector<double> mass;  // row-major, size N^dim
  std::map<std::string, std::string> meta;

  int64_t cell_count() const;
  double total_mass() const;
  /// Decode a flat row-major index into per-axis indices.
  void decode(int64_t flat, std::span<int64_t> idx) const;
  /// Coordinate of the cell center along one axis.
  double center_coord(int64_t axis_index) const {
    return (static_cast<double>(axis_index) + 0.5) / static_cast<double>(resolution);
  }
};

void validate(const AtomicMeasure& mu);
void validate(const GridMeasure& mu);

/// Builds an atomic measure from raw points/weights. Points are reduced
/// mod 1, weights renormalized to sum 1.
AtomicMeasure make_atomic(const std::vector<std::vector<double>>& points,
                          const std::vector<double>& weights);

AtomicMeasure point_mass(const std::vector<double>& point);

/// Lebesgue reference measure: every cell carries N^{-d}.
GridMeasure make_uniform_grid(int d, int64_t N);

/// Multiplies mu cellwise by a quartic spline bump that is 1 on the ball of
/// the given radius (torus metric) and rolls off to 0 at twice the radius,
/// then renormalizes. Throws if the ball carries no mass.
GridMeasure localize(const GridMeasure& mu, const std::vector<double>& center, double radius);

/// Value of the localization profile at torus distance `dist` from the center.
double localize_profile(double dist, double radius);

enum class RandomProfile { kSparseAtoms, kRoughDensity, kSmoothDensity };

/// Deterministic pseudo-random measure; pure function of (d, N, seed, profile).
GridMeasure random_measure(int d, int64_t N, uint64_t seed, RandomProfile profile);

struct ApproximantParams {
  double tau = 2.0;
  int d = 1;      // dimension of each linear-form block
  int folds = 1;  // n: number of blocks; grid dimension is d*folds
  std::vector<std::vector<int64_t>> q_set;
  /// Slab half-width per q; defaults to |q|_inf^{-tau} when empty.
  std::function<double(std::span<const int64_t>)> delta_rule;
  int64_t resolution = 64;
  /// Number of nested union layers the q_set is split into (by increasing
  /// |q|_inf); the support is the intersection of the layers' slab unions.
  int tower_depth = 1;
};

/// Normalized restriction of the uniform grid measure to a finite-depth
/// truncation of the lim sup slab set. Fourier decay of the result is not
/// asserted; it is measured downstream.
GridMeasure approximant_measure(const ApproximantParams& params);

// --- JSON serialization (exact binary64 round trip) ---
std::string measure_to_json(const AtomicMeasure& mu);
std::string measure_to_json(const GridMeasure& mu);
/// Parses either measure flavor; exactly one of the outputs is filled.
/// Returns true when the document held an atomic measure.
bool measure_from_json(const std::string& text, AtomicMeasure& atomic, GridMeasure& grid);

}  // namespace salemlab
