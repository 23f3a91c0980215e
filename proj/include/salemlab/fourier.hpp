#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "salemlab/measure.hpp"
#include "salemlab/util.hpp"

namespace salemlab {

/// A frequency the caller asked for lies outside the table box (or the table
/// cannot represent it). Carries the offending frequency.
struct CoverageError : std::runtime_error {
  CoverageError(std::string msg, std::vector<int64_t> xi)
      : std::runtime_error(std::move(msg)), frequency(std::move(xi)) {}
  std::vector<int64_t> frequency;
};

/// Complex Fourier coefficients of a probability measure, indexed by integer
/// frequencies with |xi|_inf <= box_radius. Sparse: absent in-box entries are
/// zero. coeff(0) = 1, Hermitian symmetry, |coeff| <= 1.
struct FourierTable {
  int dim = 0;
  int64_t box_radius = 0;
  std::unordered_map<int64_t, complexd> coeffs;
  std::map<std::string, std::string> meta;

  FourierTable() = default;
  FourierTable(int d, int64_t box);

  int64_t pack(std::span<const int64_t> xi) const;
  void unpack(int64_t key, std::span<int64_t> xi) const;
  bool inside_box(std::span<const int64_t> xi) const;
  /// Lookup; absent in-box entries read as zero, outside the box throws.
  complexd at(std::span<const int64_t> xi) const;
  void set(std::span<const int64_t> xi, complexd value);
  std::vector<int64_t> sorted_keys() const;
};

void validate(const FourierTable& table);

/// Exact transform of an atomic measure on the full frequency box.
FourierTable transform(const AtomicMeasure& mu, int64_t box_radius);

/// Transform of a grid measure via FFT of the mass array with cell-center
/// phase correction. Requires box_radius <= N/2 (alias guard).
FourierTable transform(const GridMeasure& mu, int64_t box_radius);

/// Transform restricted to the ray sublattice {(t_1 q, ..., t_n q) : |t|_inf
/// <= t_max}. Exact for the cell-center atom cloud of a grid measure, so it
/// is not subject to the dense alias guard; used by the linear-form sums
/// whose frequencies live far outside any dense box.
FourierTable transform_sublattice(const AtomicMeasure& mu, const std::vector<int64_t>& q,
                                  int folds, int64_t t_max);
FourierTable transform_sublattice(const GridMeasure& mu, const std::vector<int64_t>& q,
                                  int folds, int64_t t_max);

/// Dense table with |coeff(xi)| = |xi|^-alpha (Euclidean norm), coeff(0)=1.
FourierTable synthetic_power_law(int dim, int64_t box_radius, double alpha);

// --- frequency sets (enumerated in ascending lexicographic order) ---

/// Nonzero multiples of Q with Euclidean norm <= radius: {Q m : 0 < |Q m|_2 <= radius}.
std::vector<std::vector<int64_t>> lattice_multiple_freqs(int dim, int64_t Q, double radius);

/// Ray sublattice {(t_1 q, ..., t_n q) : 0 < |t|_inf <= t_max}.
std::vector<std::vector<int64_t>> ray_freqs(const std::vector<int64_t>& q, int folds,
                                            int64_t t_max);

enum class Norm { kEuclid, kSup };

/// All frequencies with |xi| <= radius in the given norm, optionally skipping 0.
std::vector<std::vector<int64_t>> box_freqs(int dim, double radius, Norm norm,
                                            bool exclude_zero);

/// Sum of coeff (or |coeff| when magnitude_only) over the listed frequencies,
/// in listed order. Throws CoverageError when a frequency exceeds the box.
complexd restricted_sum(const FourierTable& table,
                        const std::vector<std::vector<int64_t>>& freqs, bool magnitude_only);

// --- Fourier decay summary ---

struct DecayProfile {
  std::vector<std::pair<double, double>> shells;  // (radius r, max |coeff| over r <= |xi| < 2r)
  double fitted_s = 0.0;  // estimate of s in |mu^(xi)| ~ |xi|^{-s/2}
  double cap = 0.0;       // = dim
  bool zero_dominated = false;  // most shells at the magnitude floor; fitted_s clamped to cap
};

/// Shell-peak regression estimate of the decay exponent. Shells at radii
/// shell_base^k; peaks below 1e-13 are floored before the log fit.
DecayProfile decay_profile(const FourierTable& table, double shell_base);

// --- serialization ---
std::string table_to_json(const FourierTable& table);
FourierTable table_from_json(const std::string& text);
/// CSV with columns radius,peak.
std::string decay_profile_to_csv(const DecayProfile& profile);

}  // namespace salemlab
