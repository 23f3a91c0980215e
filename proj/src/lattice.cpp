#include "salemlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace salemlab {

void validate(const LatticeNeighborhood& nb) {
  if (nb.dim < 1) throw std::invalid_argument("lattice neighborhood: dim must be >= 1");
  if (nb.Q < 1) throw std::invalid_argument("lattice neighborhood: Q must be >= 1");
  if (!(nb.delta > 0.0 && nb.delta < 1.0))
    throw std::invalid_argument("lattice neighborhood: delta must lie in (0,1)");
}

void validate(const LinearFormSpec& spec) {
  if (spec.d < 1 || static_cast<int>(spec.q.size()) != spec.d)
    throw std::invalid_argument("linear form spec: q must have d entries");
  if (gcd_of(spec.q) == 0) throw std::invalid_argument("linear form spec: q must be nonzero");
  if (!(spec.delta > 0.0)) throw std::invalid_argument("linear form spec: delta must be positive");
  if (spec.folds < 1) throw std::invalid_argument("linear form spec: folds must be >= 1");
}

void validate(const PlaneUnionMeasure& pm) {
  if (pm.d < 1 || static_cast<int>(pm.q.size()) != pm.d)
    throw std::invalid_argument("plane measure: q must have d entries");
  if (gcd_of(pm.q) == 0) throw std::invalid_argument("plane measure: q must be nonzero");
}

bool in_lattice_neighborhood(std::span<const double> x, const LatticeNeighborhood& nb) {
  if (static_cast<int>(x.size()) != nb.dim)
    throw std::invalid_argument("in_lattice_neighborhood: dimension mismatch");
  double s = 0.0;
  for (double c : x) {
    const double d = dist_to_int(static_cast<double>(nb.Q) * c);
    s += d * d;
  }
  return std::sqrt(s) < nb.delta;
}

bool in_linear_form(std::span<const double> x, const LinearFormSpec& spec) {
  if (static_cast<int>(x.size()) != spec.d)
    throw std::invalid_argument("in_linear_form: dimension mismatch");
  double form = 0.0;
  for (int k = 0; k < spec.d; ++k)
    form += static_cast<double>(spec.q[static_cast<size_t>(k)]) * x[static_cast<size_t>(k)];
  return dist_to_int(form) < spec.delta;
}

MeasureEval measure_of_lattice_neighborhood(const AtomicMeasure& mu,
                                            const LatticeNeighborhood& nb) {
  if (mu.dim != nb.dim)
    throw std::invalid_argument("measure_of_lattice_neighborhood: dimension mismatch");
  MeasureEval out;
  for (size_t a = 0; a < mu.points.size(); ++a)
    if (in_lattice_neighborhood(mu.points[a], nb)) out.value += mu.weights[a];
  return out;
}

MeasureEval measure_of_lattice_neighborhood(const GridMeasure& mu, const LatticeNeighborhood& nb) {
  if (mu.dim != nb.dim)
    throw std::invalid_argument("measure_of_lattice_neighborhood: dimension mismatch");
  const int64_t N = mu.resolution;
  const int64_t M = 2 * N;
  const double threshold = nb.delta * static_cast<double>(M);
  // The scaled distance moves by at most Q * sqrt(n) across one cell.
  const double margin = static_cast<double>(nb.Q) * std::sqrt(static_cast<double>(nb.dim));

  MeasureEval out;
  const int64_t cells = mu.cell_count();
  std::vector<int64_t> idx(static_cast<size_t>(mu.dim));
  for (int64_t flat = 0; flat < cells; ++flat) {
    const double m = mu.mass[static_cast<size_t>(flat)];
    if (m == 0.0) continue;
    mu.decode(flat, idx);
    double dist2 = 0.0;
    for (int k = 0; k < mu.dim; ++k) {
      int64_t t = (nb.Q * (2 * idx[static_cast<size_t>(k)] + 1)) % M;
      if (t < 0) t += M;
      const int64_t dk = std::min(t, M - t);
      dist2 += static_cast<double>(dk) * static_cast<double>(dk);
    }
    const double dist = std::sqrt(dist2);
    if (dist < threshold) out.value += m;
    if (std::fabs(dist - threshold) <= margin) out.boundary_error += m;
  }
  return out;
}

MeasureEval measure_of_linear_form(const AtomicMeasure& mu, const LinearFormSpec& spec) {
  if (mu.dim != spec.d * spec.folds)
    throw std::invalid_argument("measure_of_linear_form: measure dim != folds * d");
  MeasureEval out;
  for (size_t a = 0; a < mu.points.size(); ++a) {
    bool member = true;
    for (int b = 0; b < spec.folds && member; ++b) {
      double form = 0.0;
      for (int k = 0; k < spec.d; ++k)
        form += static_cast<double>(spec.q[static_cast<size_t>(k)]) *
                mu.points[a][static_cast<size_t>(b * spec.d + k)];
      member = dist_to_int(form) < spec.delta;
    }
    if (member) out.value += mu.weights[a];
  }
  return out;
}

MeasureEval measure_of_linear_form(const GridMeasure& mu, const LinearFormSpec& spec) {
  if (mu.dim != spec.d * spec.folds)
    throw std::invalid_argument("measure_of_linear_form: measure dim != folds * d");
  const int64_t N = mu.resolution;
  const int64_t M = 2 * N;
  const double threshold = spec.delta * static_cast<double>(M);
  int64_t q_sum = 0;
  int64_t q_abs = 0;
  for (int64_t c : spec.q) {
    q_sum += c;
    q_abs += std::abs(c);
  }
  // q . x moves by at most sum |q_k| / (2N) across one cell.
  const double margin = static_cast<double>(q_abs);

  MeasureEval out;
  const int64_t cells = mu.cell_count();
  std::vector<int64_t> idx(static_cast<size_t>(mu.dim));
  for (int64_t flat = 0; flat < cells; ++flat) {
    const double m = mu.mass[static_cast<size_t>(flat)];
    if (m == 0.0) continue;
    mu.decode(flat, idx);
    bool member = true;
    bool decisively_in = true;
    bool decisively_out = false;
    for (int b = 0; b < spec.folds; ++b) {
      int64_t s = 0;
      for (int k = 0; k < spec.d; ++k)
        s += spec.q[static_cast<size_t>(k)] * idx[static_cast<size_t>(b * spec.d + k)];
      int64_t v = (2 * s + q_sum) % M;
      if (v < 0) v += M;
      const double db = static_cast<double>(std::min(v, M - v));
      if (!(db < threshold)) member = false;
      if (!(db <= threshold - margin)) decisively_in = false;
      if (db >= threshold + margin) {
        decisively_out = true;
        break;
      }
    }
    if (member) out.value += m;
    if (!decisively_in && !decisively_out) out.boundary_error += m;
  }
  return out;
}

double plane_fourier_coefficient(const PlaneUnionMeasure& pm, const std::vector<int64_t>& k) {
  validate(pm);
  if (k.size() != pm.q.size())
    throw std::invalid_argument("plane_fourier_coefficient: dimension mismatch");
  // Membership of k in Z q, solved at the largest |q_j| for robustness.
  size_t j = 0;
  for (size_t i = 1; i < pm.q.size(); ++i)
    if (std::abs(pm.q[i]) > std::abs(pm.q[j])) j = i;
  if (k[j] % pm.q[j] != 0) return 0.0;
  const int64_t t = k[j] / pm.q[j];
  for (size_t i = 0; i < pm.q.size(); ++i)
    if (k[i] != t * pm.q[i]) return 0.0;
  return euclid_norm(pm.q);
}

complexd plane_fourier_quadrature(const PlaneUnionMeasure& pm, const std::vector<int64_t>& k,
                                  int64_t mesh) {
  validate(pm);
  if (k.size() != pm.q.size())
    throw std::invalid_argument("plane_fourier_quadrature: dimension mismatch");
  if (mesh < 2) throw std::invalid_argument("plane_fourier_quadrature: mesh must be >= 2");
  const int d = pm.d;
  const auto& q = pm.q;

  if (d == 1) {
    // Planes degenerate to the |q| points r/q in [0,1), each of unit weight.
    const int64_t aq = std::abs(q[0]);
    complexd sum(0.0, 0.0);
    for (int64_t j = 0; j < aq; ++j) {
      const double x = static_cast<double>(j) / static_cast<double>(aq);
      const double ang = -kTwoPi * static_cast<double>(k[0]) * x;
      sum += complexd(std::cos(ang), std::sin(ang));
    }
    return sum;
  }

  size_t solved = 0;
  for (size_t i = 1; i < q.size(); ++i)
    if (std::abs(q[i]) > std::abs(q[solved])) solved = i;
  const int64_t qs = q[solved];
  const int64_t aqs = std::abs(qs);
  const double jacobian = euclid_norm(q) / static_cast<double>(aqs);

  std::vector<size_t> axes;  // the d-1 parameter axes
  for (size_t i = 0; i < q.size(); ++i)
    if (i != solved) axes.push_back(i);

  int64_t nodes = 1;
  for (size_t i = 0; i + 1 < static_cast<size_t>(d); ++i) nodes *= mesh;

  // Within a node the successive plane intersections step x by 1/|q_s|, so
  // their phases differ by this fixed unit factor.
  const double step_ang = -kTwoPi * static_cast<double>(k[solved]) / static_cast<double>(aqs);
  const complexd step(std::cos(step_ang), std::sin(step_ang));

  complexd total(0.0, 0.0);
  std::vector<double> u(axes.size());
  for (int64_t flat = 0; flat < nodes; ++flat) {
    int64_t rem = flat;
    double c = 0.0;
    double theta_other = 0.0;
    for (size_t i = axes.size(); i-- > 0;) {
      u[i] = (static_cast<double>(rem % mesh) + 0.5) / static_cast<double>(mesh);
      rem /= mesh;
      c += static_cast<double>(q[axes[i]]) * u[i];
      theta_other += static_cast<double>(k[axes[i]]) * u[i];
    }
    const double r0 = qs > 0 ? std::ceil(c) : std::floor(c);
    const double x0 = (r0 - c) / static_cast<double>(qs);  // in [0, 1/|q_s|)
    const double ang = -kTwoPi * (theta_other + static_cast<double>(k[solved]) * x0);
    complexd phase(std::cos(ang), std::sin(ang));
    complexd acc = phase;
    for (int64_t m = 1; m < aqs; ++m) {
      phase *= step;
      acc += phase;
    }
    total += acc;
  }
  return total * (jacobian / static_cast<double>(nodes));
}

double plane_ball_measure(const PlaneUnionMeasure& pm, std::span<const double> x, double eps) {
  validate(pm);
  if (static_cast<int>(x.size()) != pm.d)
    throw std::invalid_argument("plane_ball_measure: dimension mismatch");
  if (!(eps > 0.0)) throw std::invalid_argument("plane_ball_measure: eps must be positive");
  const double norm = euclid_norm(pm.q);
  double s0 = 0.0;
  for (int k = 0; k < pm.d; ++k)
    s0 += static_cast<double>(pm.q[static_cast<size_t>(k)]) * x[static_cast<size_t>(k)];
  const double cap_const = ball_volume(pm.d - 1);
  double total = 0.0;
  const int64_t r_lo = static_cast<int64_t>(std::ceil(s0 - eps * norm));
  const int64_t r_hi = static_cast<int64_t>(std::floor(s0 + eps * norm));
  for (int64_t r = r_lo; r <= r_hi; ++r) {
    const double h = std::fabs(s0 - static_cast<double>(r)) / norm;
    if (h >= eps) continue;
    const double rho = std::sqrt(eps * eps - h * h);
    total += cap_const * std::pow(rho, pm.d - 1);
  }
  return total;
}

AdConstants measure_ad_constants(const PlaneUnionMeasure& pm, double eps_lo, double eps_hi,
                                 int point_samples, int eps_samples) {
  validate(pm);
  if (!(eps_lo > 0.0 && eps_hi > eps_lo))
    throw std::invalid_argument("measure_ad_constants: bad eps range");
  size_t solved = 0;
  for (size_t i = 1; i < pm.q.size(); ++i)
    if (std::abs(pm.q[i]) > std::abs(pm.q[solved])) solved = i;

  Rng rng(1234);
  AdConstants out{1e300, 0.0};
  std::vector<double> x(static_cast<size_t>(pm.d));
  for (int s = 0; s < point_samples; ++s) {
    // A point on the plane q . x = r for r in {0, 1}.
    const double r = static_cast<double>(s % 2);
    double c = 0.0;
    for (size_t i = 0; i < pm.q.size(); ++i) {
      if (i == solved) continue;
      x[i] = rng.next_double();
      c += static_cast<double>(pm.q[i]) * x[i];
    }
    x[solved] = (r - c) / static_cast<double>(pm.q[solved]);
    for (int e = 0; e < eps_samples; ++e) {
      const double eps =
          eps_lo * std::pow(eps_hi / eps_lo, static_cast<double>(e) / (eps_samples - 1));
      const double ratio = plane_ball_measure(pm, x, eps) / std::pow(eps, pm.d - 1);
      out.lower = std::min(out.lower, ratio);
      out.upper = std::max(out.upper, ratio);
    }
  }
  return out;
}

double mollified_plane_density(const PlaneUnionMeasure& pm, const BumpProfile& profile,
                               std::span<const double> x) {
  validate(pm);
  validate(profile);
  if (profile.dim != pm.d)
    throw std::invalid_argument("mollified_plane_density: profile dimension mismatch");
  if (static_cast<int>(x.size()) != pm.d)
    throw std::invalid_argument("mollified_plane_density: point dimension mismatch");
  const double w = profile.width;
  const double norm = euclid_norm(pm.q);
  double s0 = 0.0;
  for (int k = 0; k < pm.d; ++k)
    s0 += static_cast<double>(pm.q[static_cast<size_t>(k)]) * x[static_cast<size_t>(k)];

  if (profile.kind == BumpKind::kCompactSupport) {
    // Only planes within distance w contribute; each contributes its exact
    // slice integral scaled by w^{d-1}.
    double total = 0.0;
    const int64_t r_lo = static_cast<int64_t>(std::ceil(s0 - w * norm));
    const int64_t r_hi = static_cast<int64_t>(std::floor(s0 + w * norm));
    for (int64_t r = r_lo; r <= r_hi; ++r) {
      const double h = std::fabs(s0 - static_cast<double>(r)) / norm;
      if (h >= w) continue;
      total += std::pow(w, pm.d - 1) * compact_bump_slice_integral(pm.d, pm.d - 1, h / w);
    }
    return total;
  }

  // Band-limited kind: the convolution is the finite cosine series
  //   sum_t |q| w^d phi_hat(w t q) e^{2 pi i t (q.x)}
  // which truncates exactly at the band edge.
  const int64_t t_cut = band_limited_t_cutoff(profile, w, pm.q);
  std::vector<double> arg(static_cast<size_t>(pm.d));
  double total = norm * std::pow(w, pm.d);  // t = 0 term, phi_hat(0) = 1
  for (int64_t t = 1; t <= t_cut; ++t) {
    for (int k = 0; k < pm.d; ++k)
      arg[static_cast<size_t>(k)] =
          w * static_cast<double>(t) * static_cast<double>(pm.q[static_cast<size_t>(k)]);
    const double coeff = norm * std::pow(w, pm.d) * bump_hat(profile, arg);
    total += 2.0 * coeff * std::cos(kTwoPi * static_cast<double>(t) * s0);
  }
  return total;
}

FourierTable plane_table(const PlaneUnionMeasure& pm, int64_t box_radius) {
  validate(pm);
  FourierTable table(pm.d, box_radius);
  const int64_t q_sup = static_cast<int64_t>(sup_norm(pm.q));
  std::vector<int64_t> k(static_cast<size_t>(pm.d));
  for (int64_t t = -box_radius / q_sup; t <= box_radius / q_sup; ++t) {
    for (int j = 0; j < pm.d; ++j)
      k[static_cast<size_t>(j)] = t * pm.q[static_cast<size_t>(j)];
    if (!table.inside_box(k)) continue;
    table.set(k, complexd(1.0, 0.0));  // L_q / |q|
  }
  std::ostringstream tag;
  tag << "plane:q=(";
  for (int j = 0; j < pm.d; ++j) tag << (j ? "," : "") << pm.q[static_cast<size_t>(j)];
  tag << ")";
  table.meta["provenance"] = tag.str();
  table.meta["normalization"] = "per-unit-mass";
  return table;
}

}  // namespace salemlab
