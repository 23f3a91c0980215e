#include "salemlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace salemlab {

namespace {

std::string fmt(double x) { return nlohmann::json(x).dump(); }

std::string fmt_q(std::span<const int64_t> q) {
  std::ostringstream os;
  os << "(";
  for (size_t k = 0; k < q.size(); ++k) os << (k ? "," : "") << q[k];
  os << ")";
  return os.str();
}

constexpr double kSlack = 1e-12;

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kConsistent: return "consistent";
    case Verdict::kViolated: return "violated";
    case Verdict::kSkipped: return "skipped";
  }
  return "unknown";
}

std::string to_string(SeriesClass c) {
  switch (c) {
    case SeriesClass::kConverging: return "converging";
    case SeriesClass::kDiverging: return "diverging";
    case SeriesClass::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

// --- lattice-neighborhood bounds ---

namespace {

template <class Measure>
BoundReport lattice_upper_impl(const Measure& mu, const FourierTable& table, double delta,
                               int64_t Q, double budget) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("lattice_bound_upper: delta must lie in (0,1)");
  const int n = mu.dim;
  LatticeNeighborhood nb{n, Q, delta};
  const MeasureEval lhs = measure_of_lattice_neighborhood(mu, nb);
  const double radius = 2.0 * static_cast<double>(Q) / delta;
  const double S = restricted_sum(table, lattice_multiple_freqs(n, Q, radius), true).real();
  const double rhs_main = std::pow(delta, n) * (1.0 + S);

  BoundReport rep;
  rep.name = "lattice-upper";
  rep.lhs = lhs.value;
  rep.rhs_main = rhs_main;
  rep.tail = 0.0;
  rep.ratio = rhs_main > 0.0 ? lhs.value / rhs_main : 0.0;
  rep.params["delta"] = fmt(delta);
  rep.params["Q"] = std::to_string(Q);
  rep.params["n"] = std::to_string(n);
  rep.params["S"] = fmt(S);
  rep.params["budget"] = fmt(budget);
  rep.params["boundary_error"] = fmt(lhs.boundary_error);
  if (delta >= 0.5) rep.note = "delta >= 1/2: slabs overlap, volume heuristics do not apply";
  rep.verdict = rep.ratio <= budget + kSlack ? Verdict::kConsistent : Verdict::kViolated;
  return rep;
}

template <class Measure>
BoundReport lattice_lower_impl(const Measure& mu, const FourierTable& table, double delta,
                               int64_t Q, double K, int N, double c_lower) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("lattice_bound_lower: delta must lie in (0,1)");
  if (!(K > 0.0) || N < 1) throw std::invalid_argument("lattice_bound_lower: bad K or N");
  const int n = mu.dim;
  LatticeNeighborhood nb{n, Q, delta};
  const MeasureEval lhs = measure_of_lattice_neighborhood(mu, nb);
  const double radius = K * static_cast<double>(Q) / delta;
  const double S = restricted_sum(table, lattice_multiple_freqs(n, Q, radius), true).real();
  const double rhs_main = std::pow(delta, n) * (1.0 - S);
  const double tail = std::pow(K, -N);

  BoundReport rep;
  rep.name = "lattice-lower";
  rep.lhs = lhs.value;
  rep.rhs_main = rhs_main;
  rep.tail = tail;
  rep.ratio = rhs_main > 0.0 ? lhs.value / rhs_main : 0.0;
  rep.params["delta"] = fmt(delta);
  rep.params["Q"] = std::to_string(Q);
  rep.params["n"] = std::to_string(n);
  rep.params["K"] = fmt(K);
  rep.params["N"] = std::to_string(N);
  rep.params["S"] = fmt(S);
  rep.params["c"] = fmt(c_lower);
  rep.params["boundary_error"] = fmt(lhs.boundary_error);
  if (rhs_main <= 0.0) {
    rep.verdict = Verdict::kConsistent;
    rep.note = "vacuous: Fourier sum reaches 1, bound carries no information";
  } else if (lhs.value + kSlack >= c_lower * rhs_main - tail) {
    rep.verdict = Verdict::kConsistent;
  } else {
    rep.verdict = Verdict::kViolated;
  }
  return rep;
}

template <class Measure>
BoundReport linear_upper_impl(const Measure& mu, const FourierTable& table,
                              const LinearFormSpec& spec, double budget) {
  validate(spec);
  const MeasureEval lhs = measure_of_linear_form(mu, spec);
  const int64_t t_max = static_cast<int64_t>(std::floor(2.0 / spec.delta));
  const double S =
      t_max < 1 ? 0.0
                : restricted_sum(table, ray_freqs(spec.q, spec.folds, t_max), true).real();
  const double rhs_main = std::pow(spec.delta, spec.folds) * (1.0 + S);

  BoundReport rep;
  rep.name = "linear-form-upper";
  rep.lhs = lhs.value;
  rep.rhs_main = rhs_main;
  rep.tail = 0.0;
  rep.ratio = rhs_main > 0.0 ? lhs.value / rhs_main : 0.0;
  rep.params["delta"] = fmt(spec.delta);
  rep.params["q"] = fmt_q(spec.q);
  rep.params["n"] = std::to_string(spec.folds);
  rep.params["S"] = fmt(S);
  rep.params["budget"] = fmt(budget);
  rep.params["boundary_error"] = fmt(lhs.boundary_error);
  if (spec.delta >= 0.5) rep.note = "delta >= 1/2: slabs overlap, volume heuristics do not apply";
  rep.verdict = rep.ratio <= budget + kSlack ? Verdict::kConsistent : Verdict::kViolated;
  return rep;
}

template <class Measure>
BoundReport linear_lower_impl(const Measure& mu, const FourierTable& table,
                              const LinearFormSpec& spec, double K, int N, double c_lower) {
  validate(spec);
  if (!(K > 0.0) || N < 1) throw std::invalid_argument("linear_form_bound_lower: bad K or N");
  const MeasureEval lhs = measure_of_linear_form(mu, spec);
  const int64_t t_max = static_cast<int64_t>(std::floor(K / spec.delta));
  const double S =
      t_max < 1 ? 0.0
                : restricted_sum(table, ray_freqs(spec.q, spec.folds, t_max), true).real();
  const double rhs_main = std::pow(spec.delta, spec.folds) * (1.0 - S);
  const double tail = std::pow(K, -N);

  BoundReport rep;
  rep.name = "linear-form-lower";
  rep.lhs = lhs.value;
  rep.rhs_main = rhs_main;
  rep.tail = tail;
  rep.ratio = rhs_main > 0.0 ? lhs.value / rhs_main : 0.0;
  rep.params["delta"] = fmt(spec.delta);
  rep.params["q"] = fmt_q(spec.q);
  rep.params["n"] = std::to_string(spec.folds);
  rep.params["K"] = fmt(K);
  rep.params["N"] = std::to_string(N);
  rep.params["S"] = fmt(S);
  rep.params["c"] = fmt(c_lower);
  rep.params["boundary_error"] = fmt(lhs.boundary_error);
  if (rhs_main <= 0.0) {
    rep.verdict = Verdict::kConsistent;
    rep.note = "vacuous: Fourier sum reaches 1, bound carries no information";
  } else if (lhs.value + kSlack >= c_lower * rhs_main - tail) {
    rep.verdict = Verdict::kConsistent;
  } else {
    rep.verdict = Verdict::kViolated;
  }
  return rep;
}

}  // namespace

BoundReport lattice_bound_upper(const AtomicMeasure& mu, const FourierTable& table, double delta,
                                int64_t Q, double budget) {
  return lattice_upper_impl(mu, table, delta, Q, budget);
}
BoundReport lattice_bound_upper(const GridMeasure& mu, const FourierTable& table, double delta,
                                int64_t Q, double budget) {
  return lattice_upper_impl(mu, table, delta, Q, budget);
}
BoundReport lattice_bound_lower(const AtomicMeasure& mu, const FourierTable& table, double delta,
                                int64_t Q, double K, int N, double c_lower) {
  return lattice_lower_impl(mu, table, delta, Q, K, N, c_lower);
}
BoundReport lattice_bound_lower(const GridMeasure& mu, const FourierTable& table, double delta,
                                int64_t Q, double K, int N, double c_lower) {
  return lattice_lower_impl(mu, table, delta, Q, K, N, c_lower);
}
BoundReport linear_form_bound_upper(const AtomicMeasure& mu, const FourierTable& table,
                                    const LinearFormSpec& spec, double budget) {
  return linear_upper_impl(mu, table, spec, budget);
}
BoundReport linear_form_bound_upper(const GridMeasure& mu, const FourierTable& table,
                                    const LinearFormSpec& spec, double budget) {
  return linear_upper_impl(mu, table, spec, budget);
}
BoundReport linear_form_bound_lower(const AtomicMeasure& mu, const FourierTable& table,
                                    const LinearFormSpec& spec, double K, int N, double c_lower) {
  return linear_lower_impl(mu, table, spec, K, N, c_lower);
}
BoundReport linear_form_bound_lower(const GridMeasure& mu, const FourierTable& table,
                                    const LinearFormSpec& spec, double K, int N, double c_lower) {
  return linear_lower_impl(mu, table, spec, K, N, c_lower);
}

// --- Parseval ---

namespace {

template <class Measure>
BoundReport parseval_impl(const Measure& mu, const LinearFormSpec& spec,
                          const BumpProfile& profile, int64_t trunc, double tol) {
  validate(spec);
  validate(profile);
  if (trunc < 1) throw std::invalid_argument("verify_parseval: trunc must be >= 1");
  const double delta_star = spec.delta_star();
  if (std::fabs(profile.width - delta_star) > 1e-9 * std::max(1.0, delta_star))
    throw std::invalid_argument("verify_parseval: profile width must equal delta_star");
  if (profile.dim != spec.d)
    throw std::invalid_argument("verify_parseval: profile dim must equal d");
  if (mu.dim != spec.d * spec.folds)
    throw std::invalid_argument("verify_parseval: measure dim != folds * d");

  const PlaneUnionMeasure pm{spec.d, spec.q};
  const int n = spec.folds;
  const double q_norm = euclid_norm(spec.q);

  // Direct side: integrate the product of mollified densities against mu.
  double lhs = 0.0;
  if constexpr (std::is_same_v<Measure, AtomicMeasure>) {
    for (size_t a = 0; a < mu.points.size(); ++a) {
      double prod = 1.0;
      for (int b = 0; b < n; ++b) {
        std::span<const double> block(mu.points[a].data() + b * spec.d,
                                      static_cast<size_t>(spec.d));
        prod *= mollified_plane_density(pm, profile, block);
      }
      lhs += mu.weights[a] * prod;
    }
  } else {
    const int64_t cells = mu.cell_count();
    std::vector<int64_t> idx(static_cast<size_t>(mu.dim));
    std::vector<double> block(static_cast<size_t>(spec.d));
    for (int64_t flat = 0; flat < cells; ++flat) {
      const double m = mu.mass[static_cast<size_t>(flat)];
      if (m == 0.0) continue;
      mu.decode(flat, idx);
      double prod = 1.0;
      for (int b = 0; b < n; ++b) {
        for (int k = 0; k < spec.d; ++k)
          block[static_cast<size_t>(k)] =
              mu.center_coord(idx[static_cast<size_t>(b * spec.d + k)]);
        prod *= mollified_plane_density(pm, profile, block);
      }
      lhs += m * prod;
    }
  }

  // Spectral side. phi_hat values cached per |t_i|.
  const FourierTable table = transform_sublattice(mu, spec.q, n, trunc);
  std::vector<double> hat(static_cast<size_t>(trunc) + 1);
  std::vector<double> arg(static_cast<size_t>(spec.d));
  for (int64_t t = 0; t <= trunc; ++t) {
    for (int k = 0; k < spec.d; ++k)
      arg[static_cast<size_t>(k)] =
          delta_star * static_cast<double>(t) * static_cast<double>(spec.q[static_cast<size_t>(k)]);
    hat[static_cast<size_t>(t)] = bump_hat(profile, arg);
  }

  const double prefactor =
      std::pow(delta_star, n * spec.d) * std::pow(q_norm, n);
  const int64_t tb = 2 * trunc + 1;
  int64_t t_count = 1;
  for (int b = 0; b < n; ++b) t_count *= tb;

  complexd acc(0.0, 0.0);
  double outer_shell_abs = 0.0;
  std::vector<int64_t> t(static_cast<size_t>(n));
  std::vector<int64_t> xi(static_cast<size_t>(mu.dim));
  for (int64_t flat = 0; flat < t_count; ++flat) {
    int64_t rem = flat;
    int64_t sup = 0;
    for (int b = n - 1; b >= 0; --b) {
      t[static_cast<size_t>(b)] = rem % tb - trunc;
      sup = std::max(sup, std::abs(t[static_cast<size_t>(b)]));
      rem /= tb;
    }
    double hats = 1.0;
    for (int b = 0; b < n; ++b)
      hats *= hat[static_cast<size_t>(std::abs(t[static_cast<size_t>(b)]))];
    if (hats == 0.0 && sup > 0) continue;
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < spec.d; ++k)
        xi[static_cast<size_t>(b * spec.d + k)] =
            t[static_cast<size_t>(b)] * spec.q[static_cast<size_t>(k)];
    const complexd term = std::conj(table.at(xi)) * hats;
    acc += term;
    if (sup == trunc) outer_shell_abs += std::abs(term);
  }

  const double shell_scale = prefactor * outer_shell_abs;
  const double rhs = prefactor * acc.real();
  const double imag_part = prefactor * acc.imag();
  // Convergence is judged against the leading-term scale delta_*^{n(d-1)}
  // delta^n (the t = 0 term), not |rhs| itself, which can legitimately be
  // near zero for measures away from the slabs.
  if (shell_scale > 1e-8 * std::max(std::fabs(rhs), prefactor))
    throw std::invalid_argument(
        "verify_parseval: truncation not converged at |t|_inf <= " + std::to_string(trunc) +
        " (outermost shell still contributes " + fmt(shell_scale) + ")");

  const double denom = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
  const double gap = std::fabs(lhs - rhs) / denom;

  BoundReport rep;
  rep.name = "parseval";
  rep.lhs = lhs;
  rep.rhs_main = rhs;
  rep.tail = shell_scale;
  rep.ratio = gap;
  rep.params["delta"] = fmt(spec.delta);
  rep.params["delta_star"] = fmt(delta_star);
  rep.params["q"] = fmt_q(spec.q);
  rep.params["n"] = std::to_string(n);
  rep.params["trunc"] = std::to_string(trunc);
  rep.params["tol"] = fmt(tol);
  rep.params["profile"] =
      profile.kind == BumpKind::kBandLimited ? "band-limited" : "compact-support";
  if (std::fabs(imag_part) > 1e-10 * denom) rep.note = "imaginary residue " + fmt(imag_part);
  rep.verdict = gap < tol ? Verdict::kConsistent : Verdict::kViolated;
  return rep;
}

}  // namespace

BoundReport verify_parseval(const AtomicMeasure& mu, const LinearFormSpec& spec,
                            const BumpProfile& profile, int64_t trunc, double tol) {
  return parseval_impl(mu, spec, profile, trunc, tol);
}
BoundReport verify_parseval(const GridMeasure& mu, const LinearFormSpec& spec,
                            const BumpProfile& profile, int64_t trunc, double tol) {
  return parseval_impl(mu, spec, profile, trunc, tol);
}

// --- tail envelope ---

BoundReport tail_envelope(const BumpProfile& profile, const LinearFormSpec& spec, double K,
                          int N) {
  validate(profile);
  validate(spec);
  if (!(K > 0.0) || N < 1) throw std::invalid_argument("tail_envelope: bad K or N");
  const int n = spec.folds;
  const double delta = spec.delta;
  const double delta_star = spec.delta_star();
  const double q_norm = euclid_norm(spec.q);
  const double a = delta_star * q_norm;  // = delta
  const int64_t m_min = static_cast<int64_t>(std::ceil(K / delta));

  int64_t m_stop;
  if (profile.kind == BumpKind::kBandLimited) {
    m_stop = band_limited_t_cutoff(profile, delta_star, spec.q);
  } else {
    m_stop = std::min<int64_t>(8192, std::max<int64_t>(512, 8 * m_min));
  }

  std::vector<double> g(static_cast<size_t>(m_stop) + 1);
  std::vector<double> arg(static_cast<size_t>(spec.d));
  for (int64_t m = 0; m <= m_stop; ++m) {
    for (int k = 0; k < spec.d; ++k)
      arg[static_cast<size_t>(k)] = delta_star * static_cast<double>(m) *
                                    static_cast<double>(spec.q[static_cast<size_t>(k)]);
    g[static_cast<size_t>(m)] = std::fabs(bump_hat(profile, arg));
  }

  const double power = static_cast<double>(N + n);
  auto comparison_weight = [&](int64_t m) {
    return std::pow(1.0 + a * static_cast<double>(m), -power);
  };

  double g_in = g[0], g_tail = 0.0, p_in = 1.0, p_tail = 0.0, c_phi = g[0];
  for (int64_t m = 1; m <= m_stop; ++m) {
    const double pw = comparison_weight(m);
    if (m < m_min) {
      g_in += 2.0 * g[static_cast<size_t>(m)];
      p_in += 2.0 * pw;
    } else {
      g_tail += 2.0 * g[static_cast<size_t>(m)];
      p_tail += 2.0 * pw;
    }
    c_phi = std::max(c_phi, g[static_cast<size_t>(m)] / pw);
  }
  const double g_all = g_in + g_tail;
  const double p_all = p_in + p_tail;

  // x_all^n - x_in^n via the factored form; avoids cancellation when the
  // tail is many orders below the head.
  auto box_complement = [n](double all, double in, double tail_part) {
    double mix = 0.0;
    for (int i = 0; i < n; ++i) mix += std::pow(all, i) * std::pow(in, n - 1 - i);
    return tail_part * mix;
  };
  const double T = box_complement(g_all, g_in, g_tail);
  const double comparison = box_complement(p_all, p_in, p_tail);
  const double envelope = std::pow(c_phi, n) * comparison;
  const double comparison_const = comparison * std::pow(a, n) * std::pow(K, N);

  BoundReport rep;
  rep.name = "tail-envelope";
  rep.lhs = T;
  rep.rhs_main = envelope;
  rep.tail = std::pow(K, -N);
  rep.ratio = envelope > 0.0 ? T / envelope : 0.0;
  rep.params["K"] = fmt(K);
  rep.params["N"] = std::to_string(N);
  rep.params["delta"] = fmt(delta);
  rep.params["delta_star"] = fmt(delta_star);
  rep.params["q"] = fmt_q(spec.q);
  rep.params["n"] = std::to_string(n);
  rep.params["c_phi"] = fmt(c_phi);
  rep.params["comparison_const"] = fmt(comparison_const);
  rep.params["t_threshold"] = std::to_string(m_min);
  rep.params["t_stop"] = std::to_string(m_stop);
  rep.params["profile"] =
      profile.kind == BumpKind::kBandLimited ? "band-limited" : "compact-support";
  if (profile.kind == BumpKind::kBandLimited && T == 0.0)
    rep.note = "tail vanishes: K/delta beyond the band edge";
  rep.verdict = T <= envelope * (1.0 + 1e-9) + 1e-300 ? Verdict::kConsistent : Verdict::kViolated;
  return rep;
}

// --- series scans ---

SeriesReport borel_cantelli_scan(const FourierTable& table, double tau_prime, int64_t Q_max,
                                 ScanMode mode, const std::vector<std::vector<int64_t>>& q_list,
                                 int folds) {
  if (!(tau_prime > 0.0))
    throw std::invalid_argument("borel_cantelli_scan: tau_prime must be positive");
  if (Q_max < 2) throw std::invalid_argument("borel_cantelli_scan: Q_max must be >= 2");

  SeriesReport rep;
  std::vector<double> positions;
  std::vector<double> terms;
  double sum = 0.0;

  if (mode == ScanMode::kLattice) {
    const int n = table.dim;
    const double vol = ball_volume(n);
    rep.exponent_rule =
        "delta_Q = Q^-" + fmt(tau_prime) + "; term = v_n delta_Q^n (1 + S_Q), n = " +
        std::to_string(n);
    for (int64_t Q = 1; Q <= Q_max; ++Q) {
      const double delta = std::pow(static_cast<double>(Q), -tau_prime);
      const double wanted = 2.0 * static_cast<double>(Q) / delta;
      const double radius = std::min(wanted, static_cast<double>(table.box_radius));
      if (radius < wanted) rep.coverage_truncated = true;
      const double S =
          restricted_sum(table, lattice_multiple_freqs(n, Q, radius), true).real();
      const double term = vol * std::pow(delta, n) * (1.0 + S);
      sum += term;
      positions.push_back(static_cast<double>(Q));
      terms.push_back(term);
      rep.partial_sums.emplace_back(static_cast<double>(Q), sum);
    }
  } else {
    if (q_list.empty())
      throw std::invalid_argument("borel_cantelli_scan: linear-form mode needs a q list");
    const int d = static_cast<int>(q_list.front().size());
    if (table.dim != d * folds)
      throw std::invalid_argument("borel_cantelli_scan: table dim != folds * d");
    const double vol = std::pow(2.0, folds);
    rep.exponent_rule = "delta_q = |q|_inf^-" + fmt(tau_prime) +
                        "; term = 2^n delta_q^n (1 + S_q), n = " + std::to_string(folds);
    // Shell totals over |q|_inf for the slope regression.
    std::map<int64_t, double> shell_totals;
    for (const auto& q : q_list) {
      const int64_t q_sup = static_cast<int64_t>(sup_norm(q));
      if (q_sup > Q_max) continue;
      const double delta = std::pow(static_cast<double>(q_sup), -tau_prime);
      const int64_t wanted = static_cast<int64_t>(std::floor(2.0 / delta));
      const int64_t covered = table.box_radius / std::max<int64_t>(q_sup, 1);
      const int64_t t_max = std::min(wanted, covered);
      if (t_max < wanted) rep.coverage_truncated = true;
      const double S =
          t_max < 1 ? 0.0 : restricted_sum(table, ray_freqs(q, folds, t_max), true).real();
      const double term = vol * std::pow(delta, folds) * (1.0 + S);
      sum += term;
      shell_totals[q_sup] += term;
      rep.partial_sums.emplace_back(static_cast<double>(q_sup), sum);
    }
    for (const auto& [m, total] : shell_totals) {
      positions.push_back(static_cast<double>(m));
      terms.push_back(total);
    }
  }

  // Regress log(term) against log(position) over the last decade.
  const double hi = positions.empty() ? 0.0 : positions.back();
  std::vector<double> xs, ys;
  for (size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < std::max(2.0, hi / 10.0)) continue;
    if (terms[i] <= 0.0) continue;
    xs.push_back(std::log(positions[i]));
    ys.push_back(std::log(terms[i]));
  }
  if (xs.size() < 3) {
    rep.classified = SeriesClass::kInconclusive;
    return rep;
  }
  rep.tail_slope = least_squares_slope(xs, ys);
  // Terms decaying exactly like 1/Q still diverge, so the boundary slope
  // classifies as diverging; only a clear margin below -1 counts as
  // convergence evidence.
  if (rep.tail_slope < -1.05)
    rep.classified = SeriesClass::kConverging;
  else if (rep.tail_slope >= -1.0 - 1e-3)
    rep.classified = SeriesClass::kDiverging;
  else
    rep.classified = SeriesClass::kInconclusive;
  return rep;
}

std::vector<std::vector<int64_t>> primitive_reps(int d, int64_t sup_max) {
  if (d < 1 || sup_max < 1) throw std::invalid_argument("primitive_reps: bad arguments");
  std::vector<std::vector<int64_t>> out;
  const int64_t base = 2 * sup_max + 1;
  int64_t count = 1;
  for (int k = 0; k < d; ++k) count *= base;
  std::vector<int64_t> q(static_cast<size_t>(d));
  for (int64_t flat = 0; flat < count; ++flat) {
    int64_t rem = flat;
    for (int k = d - 1; k >= 0; --k) {
      q[static_cast<size_t>(k)] = rem % base - sup_max;
      rem /= base;
    }
    if (gcd_of(q) != 1) continue;
    // one representative per +- line: first nonzero coordinate positive
    bool keep = false;
    for (int k = 0; k < d; ++k) {
      if (q[static_cast<size_t>(k)] == 0) continue;
      keep = q[static_cast<size_t>(k)] > 0;
      break;
    }
    if (keep) out.push_back(q);
  }
  std::sort(out.begin(), out.end(), [](const auto& lhs, const auto& rhs) {
    const double ls = sup_norm(lhs), rs = sup_norm(rhs);
    if (ls != rs) return ls < rs;
    return lhs < rhs;
  });
  return out;
}

TauEpsChoice choose_tau_eps(double tau, double eps, int n) {
  if (n < 1) throw std::invalid_argument("choose_tau_eps: n must be >= 1");
  if (!(tau > 1.0 / n)) throw std::invalid_argument("choose_tau_eps: tau must exceed 1/n");
  if (!(eps > 0.0)) throw std::invalid_argument("choose_tau_eps: eps must be positive");
  const double rate = 1.0 / (1.0 + tau) + eps;  // decay |mu^| ~ |xi|^{-rate}
  auto exponent = [&](double t) { return -t * rate - rate; };
  // exponent(t) < -1 iff t > (1 - rate) / rate.
  const double t_min = (1.0 - rate) / rate;
  TauEpsChoice choice;
  choice.feasible_lo = std::max(1.0 / n, t_min);
  choice.feasible_hi = tau;
  if (!(choice.feasible_lo < choice.feasible_hi))
    throw std::domain_error("choose_tau_eps: feasible interval empty");
  choice.value = 0.5 * (choice.feasible_lo + choice.feasible_hi);
  choice.exponent = exponent(choice.value);
  if (!(choice.exponent < -1.0))
    throw std::logic_error("choose_tau_eps: midpoint fails the exponent inequality");
  return choice;
}

double choose_tau_prime(double tau, double alpha, int d, int n) {
  if (d < 1 || n < 1) throw std::invalid_argument("choose_tau_prime: bad dimensions");
  if (!(tau > static_cast<double>(d) / n))
    throw std::invalid_argument("choose_tau_prime: tau must exceed d/n");
  if (!(alpha > static_cast<double>(d) / (1.0 + tau)))
    throw std::domain_error("choose_tau_prime: decay rate below d/(1+tau)");
  const double lo = std::max(static_cast<double>(d) / n, static_cast<double>(d) / alpha - 1.0);
  const double h = 0.9;
  const double tp = lo * (1.0 - h) + tau * h;
  if (!(n * tp > d) || !(alpha * (1.0 + tp) > d) || !(tp < tau))
    throw std::logic_error("choose_tau_prime: constraints failed");
  return tp;
}

TailSchedule lemma_tail_schedule(int64_t Q, double rho_prime, double target_exp) {
  if (Q < 1 || !(rho_prime > 0.0) || !(target_exp > 0.0))
    throw std::invalid_argument("lemma_tail_schedule: bad arguments");
  TailSchedule s;
  s.K = std::pow(static_cast<double>(Q), rho_prime);
  s.N = static_cast<int>(std::ceil((target_exp + 1.0) / rho_prime));
  return s;
}

namespace {

double badness_scan(std::span<const double> x, int64_t q_lo, int64_t q_hi) {
  if (x.empty()) throw std::invalid_argument("badness: empty point");
  if (q_hi < q_lo || q_lo < 1) throw std::invalid_argument("badness: bad scan range");
  const double inv_n = 1.0 / static_cast<double>(x.size());
  double best = 1e300;
  for (int64_t q = q_lo; q <= q_hi; ++q) {
    double s = 0.0;
    for (double c : x) {
      const double dk = dist_to_int(static_cast<double>(q) * c);
      s += dk * dk;
    }
    best = std::min(best, std::pow(static_cast<double>(q), inv_n) * std::sqrt(s));
  }
  return best;
}

}  // namespace

double badness(std::span<const double> x, int64_t Q_max) {
  return badness_scan(x, 1, Q_max);
}

double badness_limit(std::span<const double> x, int64_t Q_max) {
  if (Q_max < 2) throw std::invalid_argument("badness_limit: Q_max must be >= 2");
  return badness_scan(x, Q_max / 2 + 1, Q_max);
}

BoundReport non_salem_witness(double tau, int d, int folds, const GridMeasure& mu,
                              int64_t box_radius, double shell_base, double slack) {
  if (mu.dim != d * folds)
    throw std::invalid_argument("non_salem_witness: measure dim != folds * d");
  const FourierTable table = transform(mu, box_radius);
  const DecayProfile profile = decay_profile(table, shell_base);
  const double ceiling = 2.0 * static_cast<double>(d) / (1.0 + tau);

  BoundReport rep;
  rep.name = "non-salem-witness";
  rep.lhs = profile.fitted_s;
  rep.rhs_main = ceiling;
  rep.tail = slack;
  rep.ratio = ceiling > 0.0 ? profile.fitted_s / ceiling : 0.0;
  rep.params["tau"] = fmt(tau);
  rep.params["d"] = std::to_string(d);
  rep.params["n"] = std::to_string(folds);
  rep.params["fitted_s"] = fmt(profile.fitted_s);
  rep.params["ceiling"] = fmt(ceiling);
  rep.params["shell_base"] = fmt(shell_base);
  rep.params["slack"] = fmt(slack);
  rep.params["zero_dominated"] = profile.zero_dominated ? "true" : "false";

  const double alpha = 0.5 * profile.fitted_s;
  const double threshold = static_cast<double>(d) / (1.0 + tau);
  if (alpha > threshold + 1e-12) {
    const double tp = choose_tau_prime(tau, alpha, d, folds);
    rep.params["tau_prime"] = fmt(tp);
    rep.params["n_tau_prime"] = fmt(folds * tp);
    rep.params["alpha_times_1_plus_tau_prime"] = fmt(alpha * (1.0 + tp));
    rep.note =
        "measured decay above d/(1+tau): both escape exponents exceed d, the scheduled slab "
        "series converges";
  } else {
    rep.note = "measured decay at or below d/(1+tau): evidence consistent with the ceiling";
  }
  rep.verdict =
      profile.fitted_s <= ceiling + slack ? Verdict::kConsistent : Verdict::kViolated;
  return rep;
}

// --- batteries ---

namespace {

const char* profile_name(RandomProfile p) {
  switch (p) {
    case RandomProfile::kSparseAtoms: return "sparse-atoms";
    case RandomProfile::kRoughDensity: return "rough-density";
    case RandomProfile::kSmoothDensity: return "smooth-density";
  }
  return "unknown";
}

void tag_case(BoundReport& rep, uint64_t seed, RandomProfile profile) {
  rep.params["seed"] = std::to_string(seed);
  rep.params["measure"] = profile_name(profile);
}

void sort_reports(std::vector<BoundReport>& reports) {
  std::sort(reports.begin(), reports.end(), [](const BoundReport& a, const BoundReport& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.params < b.params;
  });
}

}  // namespace

std::vector<BoundReport> run_default_battery(const BatteryConfig& config) {
  std::vector<BoundReport> out;
  const RandomProfile profiles[] = {RandomProfile::kSparseAtoms, RandomProfile::kRoughDensity,
                                    RandomProfile::kSmoothDensity};
  auto budget = [&](double def) {
    return config.budget_override > 0.0 ? config.budget_override : def;
  };
  // An undersized table turns a case into a skipped report carrying the
  // offending frequency; under strict mode the coverage error propagates.
  auto guard = [&](const std::string& name, uint64_t seed, RandomProfile profile, auto&& fn) {
    try {
      BoundReport rep = fn();
      tag_case(rep, seed, profile);
      out.push_back(std::move(rep));
    } catch (const CoverageError& err) {
      if (config.strict) throw;
      BoundReport rep;
      rep.name = name;
      tag_case(rep, seed, profile);
      rep.verdict = Verdict::kSkipped;
      rep.note = std::string("coverage: ") + err.what();
      out.push_back(std::move(rep));
    }
  };

  const std::vector<std::vector<int64_t>> q_list = {{1, 0}, {1, 1}, {2, 1}, {3, 2},
                                                    {5, 2}, {8, 3}, {7, 5}, {8, 1}};
  const std::vector<std::pair<double, int64_t>> grid_1d = {
      {0.2, 3}, {0.2, 7}, {0.2, 10}, {0.1, 3}, {0.1, 7}, {0.1, 10}, {0.05, 3}, {0.05, 7},
      {0.05, 10}};
  const std::vector<std::pair<double, int64_t>> upper_2d = {{0.2, 3},  {0.2, 7}, {0.2, 10},
                                                            {0.1, 3},  {0.1, 7}, {0.05, 3}};
  const std::vector<std::pair<double, int64_t>> lower_2d = {{0.2, 3}, {0.2, 7}, {0.2, 10},
                                                            {0.1, 3}, {0.05, 3}};
  const double deltas_lf[] = {0.2, 0.125};

  for (int seed = 1; seed <= config.seeds; ++seed) {
    const auto useed = static_cast<uint64_t>(seed);
    for (RandomProfile profile : profiles) {
      // lattice bounds, n = 1
      {
        const GridMeasure mu = random_measure(1, 4096, useed, profile);
        const FourierTable table = transform(mu, config.box_1d);
        for (const auto& [delta, Q] : grid_1d) {
          guard("lattice-upper", useed, profile, [&] {
            return lattice_bound_upper(mu, table, delta, Q, budget(10.0 * ball_volume(1)));
          });
          guard("lattice-lower", useed, profile, [&] {
            return lattice_bound_lower(mu, table, delta, Q, 4.0, 8, ball_volume(1) / 10.0);
          });
        }
      }
      // lattice bounds, n = 2, and linear forms d = 2, n = 1 on the same grids
      {
        const GridMeasure mu = random_measure(2, 512, useed, profile);
        const FourierTable table = transform(mu, config.box_2d);
        for (const auto& [delta, Q] : upper_2d) {
          guard("lattice-upper", useed, profile, [&] {
            return lattice_bound_upper(mu, table, delta, Q, budget(10.0 * ball_volume(2)));
          });
        }
        for (const auto& [delta, Q] : lower_2d) {
          guard("lattice-lower", useed, profile, [&] {
            return lattice_bound_lower(mu, table, delta, Q, 4.0, 8, ball_volume(2) / 10.0);
          });
        }
        for (const auto& q : q_list) {
          for (double delta : deltas_lf) {
            const LinearFormSpec spec{2, q, delta, 1};
            guard("linear-form-upper", useed, profile, [&] {
              return linear_form_bound_upper(mu, table, spec, budget(10.0 * 2.0));
            });
            guard("linear-form-lower", useed, profile, [&] {
              return linear_form_bound_lower(mu, table, spec, 2.0, 10, 2.0 / 10.0);
            });
          }
        }
      }
      // linear forms d = 2, n = 2 on 4-dimensional grids
      {
        const GridMeasure mu = random_measure(4, 16, useed, profile);
        for (const auto& q : q_list) {
          const FourierTable table = transform_sublattice(mu, q, 2, 16);
          for (double delta : deltas_lf) {
            const LinearFormSpec spec{2, q, delta, 2};
            guard("linear-form-upper", useed, profile, [&] {
              return linear_form_bound_upper(mu, table, spec, budget(10.0 * 4.0));
            });
            guard("linear-form-lower", useed, profile, [&] {
              return linear_form_bound_lower(mu, table, spec, 2.0, 10, 4.0 / 10.0);
            });
          }
        }
      }
    }
  }
  sort_reports(out);
  return out;
}

std::vector<BoundReport> run_parseval_battery(double tol) {
  std::vector<BoundReport> out;
  const std::vector<std::vector<int64_t>> q_list = {{1, 0}, {2, 1}};
  const double delta = 0.125;

  for (int n = 1; n <= 2; ++n) {
    for (const auto& q : q_list) {
      LinearFormSpec spec{2, q, delta, n};
      BumpProfile profile{BumpKind::kBandLimited, spec.delta_star(), 2, 2.0};
      const int64_t trunc = band_limited_t_cutoff(profile, spec.delta_star(), q) + 1;

      auto tag = [&](BoundReport rep, const std::string& kind) {
        rep.params["case"] = kind;
        out.push_back(rep);
      };

      if (n == 1) {
        tag(verify_parseval(point_mass({0.3, 0.7}), spec, profile, trunc, tol), "point-mass");
        tag(verify_parseval(make_uniform_grid(2, 256), spec, profile, trunc, tol), "uniform");
        tag(verify_parseval(random_measure(2, 128, 7, RandomProfile::kSparseAtoms), spec, profile,
                            trunc, tol),
            "random-seed7");
        tag(verify_parseval(random_measure(2, 128, 8, RandomProfile::kRoughDensity), spec, profile,
                            trunc, tol),
            "random-seed8");
        tag(verify_parseval(random_measure(2, 128, 9, RandomProfile::kSmoothDensity), spec,
                            profile, trunc, tol),
            "random-seed9");
      } else {
        tag(verify_parseval(point_mass({0.3, 0.7, 0.1, 0.9}), spec, profile, trunc, tol),
            "point-mass");
        tag(verify_parseval(make_uniform_grid(4, 16), spec, profile, trunc, tol), "uniform");
        tag(verify_parseval(random_measure(4, 16, 7, RandomProfile::kSparseAtoms), spec, profile,
                            trunc, tol),
            "random-seed7");
        tag(verify_parseval(random_measure(4, 16, 8, RandomProfile::kRoughDensity), spec, profile,
                            trunc, tol),
            "random-seed8");
        tag(verify_parseval(random_measure(4, 16, 9, RandomProfile::kSmoothDensity), spec, profile,
                            trunc, tol),
            "random-seed9");
      }
    }
  }
  sort_reports(out);
  return out;
}

// --- serialization ---

namespace {

nlohmann::json report_to_json_obj(const BoundReport& rep) {
  nlohmann::json j;
  j["name"] = rep.name;
  j["lhs"] = rep.lhs;
  j["rhs_main"] = rep.rhs_main;
  j["tail"] = rep.tail;
  j["ratio"] = rep.ratio;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : rep.params) params[k] = v;
  j["params"] = std::move(params);
  j["verdict"] = to_string(rep.verdict);
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += "\"";
  return quoted;
}

std::string params_compact(const BoundReport& rep) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : rep.params) params[k] = v;
  return params.dump();
}

}  // namespace

std::string reports_to_json(const std::vector<BoundReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& rep : reports) arr.push_back(report_to_json_obj(rep));
  return arr.dump(2);
}

std::string reports_to_csv(const std::vector<BoundReport>& reports) {
  std::ostringstream os;
  os << "name,params,lhs,rhs_main,tail,ratio,verdict\r\n";
  for (const auto& rep : reports) {
    os << csv_escape(rep.name) << "," << csv_escape(params_compact(rep)) << "," << fmt(rep.lhs)
       << "," << fmt(rep.rhs_main) << "," << fmt(rep.tail) << "," << fmt(rep.ratio) << ","
       << to_string(rep.verdict) << "\r\n";
  }
  return os.str();
}

std::string series_to_json(const SeriesReport& report) {
  nlohmann::json j;
  j["exponent_rule"] = report.exponent_rule;
  nlohmann::json sums = nlohmann::json::array();
  for (const auto& [pos, value] : report.partial_sums) sums.push_back({pos, value});
  j["partial_sums"] = std::move(sums);
  j["classified"] = to_string(report.classified);
  j["tail_slope"] = report.tail_slope;
  j["coverage_truncated"] = report.coverage_truncated;
  return j.dump(2);
}

std::string series_to_csv(const SeriesReport& report) {
  std::ostringstream os;
  os << "position,partial_sum\r\n";
  for (const auto& [pos, value] : report.partial_sums)
    os << fmt(pos) << "," << fmt(value) << "\r\n";
  return os.str();
}

bool any_violation(const std::vector<BoundReport>& reports) {
  for (const auto& rep : reports)
    if (rep.verdict == Verdict::kViolated) return true;
  return false;
}

}  // namespace salemlab
