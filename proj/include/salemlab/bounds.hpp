#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "salemlab/bump.hpp"
#include "salemlab/fourier.hpp"
#include "salemlab/lattice.hpp"
#include "salemlab/measure.hpp"

namespace salemlab {

enum class Verdict { kConsistent, kViolated, kSkipped };
std::string to_string(Verdict v);

/// One evaluated inequality: both sides, the implied-constant bookkeeping,
/// and the verdict against the configured constant budget.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs_main = 0.0;  // the delta^n (1 +- S) part
  double tail = 0.0;      // the K^{-N} or T part
  double ratio = 0.0;     // lhs / rhs_main when rhs_main > 0
  std::map<std::string, std::string> params;
  Verdict verdict = Verdict::kConsistent;
  std::string note;
};

enum class SeriesClass { kConverging, kDiverging, kInconclusive };
std::string to_string(SeriesClass c);

struct SeriesReport {
  std::string exponent_rule;
  std::vector<std::pair<double, double>> partial_sums;  // (scan position, partial sum)
  SeriesClass classified = SeriesClass::kInconclusive;
  double tail_slope = 0.0;     // regression slope over the last decade of terms
  bool coverage_truncated = false;  // some sums were cut at the table box
};

// --- lattice-neighborhood counting bounds (dual sums over multiples of Q) ---

/// Upper bound check: mu(A(delta,Q)) <= budget * delta^n (1 + S) with
/// S = sum over {Q | xi, 0 < |xi| <= 2Q/delta} of |mu^(xi)|.
BoundReport lattice_bound_upper(const AtomicMeasure& mu, const FourierTable& table, double delta,
                                int64_t Q, double budget);
BoundReport lattice_bound_upper(const GridMeasure& mu, const FourierTable& table, double delta,
                                int64_t Q, double budget);

/// Lower bound check: mu(A(delta,Q)) >= c * delta^n (1 - S_K) - K^{-N} with
/// S_K summed to radius KQ/delta. Vacuous (and recorded as such) when the
/// Fourier sum reaches 1.
BoundReport lattice_bound_lower(const AtomicMeasure& mu, const FourierTable& table, double delta,
                                int64_t Q, double K, int N, double c_lower);
BoundReport lattice_bound_lower(const GridMeasure& mu, const FourierTable& table, double delta,
                                int64_t Q, double K, int N, double c_lower);

// --- linear-form counting bounds (dual sums over the ray sublattice) ---

BoundReport linear_form_bound_upper(const AtomicMeasure& mu, const FourierTable& table,
                                    const LinearFormSpec& spec, double budget);
BoundReport linear_form_bound_upper(const GridMeasure& mu, const FourierTable& table,
                                    const LinearFormSpec& spec, double budget);

BoundReport linear_form_bound_lower(const AtomicMeasure& mu, const FourierTable& table,
                                    const LinearFormSpec& spec, double K, int N, double c_lower);
BoundReport linear_form_bound_lower(const GridMeasure& mu, const FourierTable& table,
                                    const LinearFormSpec& spec, double K, int N, double c_lower);

// --- Parseval pairing of the mollified plane density against the spectrum ---

/// lhs integrates prod_i (phi_{delta*} * L_q)(x^{(i)}) against mu directly;
/// rhs is delta*^{nd} |q|^n sum_t conj(mu^(t_1 q,...,t_n q)) prod phi_hat.
/// Throws when the truncation at |t|_inf <= trunc has not converged.
BoundReport verify_parseval(const AtomicMeasure& mu, const LinearFormSpec& spec,
                            const BumpProfile& profile, int64_t trunc, double tol);
BoundReport verify_parseval(const GridMeasure& mu, const LinearFormSpec& spec,
                            const BumpProfile& profile, int64_t trunc, double tol);

/// Worst-case tail sum T (|mu^| replaced by 1) of the Parseval series beyond
/// |t|_inf >= K/delta, against the envelope c_phi^n * C * (delta*|q|)^{-n} K^{-N}
/// with both constants measured from the profile's transform decay.
BoundReport tail_envelope(const BumpProfile& profile, const LinearFormSpec& spec, double K, int N);

// --- series scans and exponent schedules ---

enum class ScanMode { kLattice, kLinearForm };

SeriesReport borel_cantelli_scan(const FourierTable& table, double tau_prime, int64_t Q_max,
                                 ScanMode mode,
                                 const std::vector<std::vector<int64_t>>& q_list = {},
                                 int folds = 1);

/// Primitive integer vectors with |q|_inf <= sup_max, one representative per
/// +- line (first nonzero coordinate positive), ordered by (|q|_inf, lex).
std::vector<std::vector<int64_t>> primitive_reps(int d, int64_t sup_max);

struct TauEpsChoice {
  double value = 0.0;     // midpoint of the feasible interval
  double feasible_lo = 0.0;
  double feasible_hi = 0.0;
  double exponent = 0.0;  // scan exponent at `value`; < -1 by construction
};

/// Feasible schedule exponent tau(eps) in (1/n, tau) making the scan series
/// summable under decay |mu^| ~ |xi|^{-1/(1+tau)-eps}.
TauEpsChoice choose_tau_eps(double tau, double eps, int n);

/// tau' with n tau' > d and alpha (1 + tau') > d, biased toward tau;
/// alpha is the measured decay rate of |mu^|.
double choose_tau_prime(double tau, double alpha, int d, int n);

struct TailSchedule {
  double K = 1.0;
  int N = 1;
};

/// K = Q^{rho'} and N large enough that K^{-N} = o(delta_Q^n) along the
/// schedule delta_Q = Q^{-target_exp/n} (i.e. K^{-N} <= Q^{-(target_exp+1)}).
TailSchedule lemma_tail_schedule(int64_t Q, double rho_prime, double target_exp);

/// min over 1 <= q <= Q_max of q^{1/n} * ||q x||; the badness functional.
/// Monotone nonincreasing in Q_max and zero once any q x hits the lattice.
double badness(std::span<const double> x, int64_t Q_max);

/// Tail variant: min over Q_max/2 < q <= Q_max. Estimates the asymptotic
/// badness constant (the liminf), which the full minimum undershoots
/// whenever an early q dips below the limit (e.g. q = 1 for the golden
/// ratio). This is the quantity that approaches 1/sqrt(5) etc.
double badness_limit(std::span<const double> x, int64_t Q_max);

/// Measured-decay ceiling check for an approximant measure: fitted_s from the
/// shell regression against the value 2d/(1+tau), plus the convergence
/// exponents n tau' and alpha (1+tau') that drive the escape argument.
BoundReport non_salem_witness(double tau, int d, int folds, const GridMeasure& mu,
                              int64_t box_radius, double shell_base = 1.5, double slack = 0.15);

// --- batteries ---

struct BatteryConfig {
  int seeds = 20;
  /// Absolute cap on upper-bound ratios; <= 0 keeps the per-family defaults
  /// (10 v_n for the lattice family, 10 * 2^n for the linear-form family).
  double budget_override = -1.0;
  bool strict = false;  // promote coverage warnings to errors
  /// Table boxes; the defaults cover every case in the default grid. An
  /// undersized override degrades cases to skipped (or errors under strict).
  int64_t box_1d = 1280;
  int64_t box_2d = 250;
};

std::vector<BoundReport> run_default_battery(const BatteryConfig& config);
std::vector<BoundReport> run_parseval_battery(double tol = 1e-6);

// --- serialization ---
std::string reports_to_json(const std::vector<BoundReport>& reports);
std::string reports_to_csv(const std::vector<BoundReport>& reports);
std::string series_to_json(const SeriesReport& report);
std::string series_to_csv(const SeriesReport& report);
bool any_violation(const std::vector<BoundReport>& reports);

}  // namespace salemlab
