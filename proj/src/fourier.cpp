#include "salemlab/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace salemlab {

namespace {

constexpr double kTableTol = 1e-12;
constexpr double kPeakFloor = 1e-13;

std::string format_frequency(std::span<const int64_t> xi) {
  std::ostringstream os;
  os << "(";
  for (size_t k = 0; k < xi.size(); ++k) os << (k ? "," : "") << xi[k];
  os << ")";
  return os.str();
}

/// Per-axis phases e^{-2 pi i x xi} for xi = -box..box, Hermitian by
/// construction, with periodic refresh so recurrence drift stays below 1e-13.
std::vector<complexd> axis_phases(double x, int64_t box) {
  std::vector<complexd> p(static_cast<size_t>(2 * box + 1));
  const size_t mid = static_cast<size_t>(box);
  p[mid] = 1.0;
  const complexd step(std::cos(kTwoPi * x), -std::sin(kTwoPi * x));
  for (int64_t j = 1; j <= box; ++j) {
    if (j % 256 == 0) {
      const double ang = -kTwoPi * x * static_cast<double>(j);
      p[mid + static_cast<size_t>(j)] = complexd(std::cos(ang), std::sin(ang));
    } else {
      p[mid + static_cast<size_t>(j)] = p[mid + static_cast<size_t>(j) - 1] * step;
    }
    p[mid - static_cast<size_t>(j)] = std::conj(p[mid + static_cast<size_t>(j)]);
  }
  return p;
}

int64_t box_cell_count(int dim, int64_t box_radius) {
  const int64_t base = 2 * box_radius + 1;
  int64_t count = 1;
  for (int k = 0; k < dim; ++k) {
    if (count > (int64_t{1} << 31)) throw std::invalid_argument("frequency box too large");
    count *= base;
  }
  return count;
}

}  // namespace

FourierTable::FourierTable(int d, int64_t box) : dim(d), box_radius(box) {
  if (d < 1) throw std::invalid_argument("FourierTable: dim must be >= 1");
  if (box < 1) throw std::invalid_argument("FourierTable: box_radius must be >= 1");
  double cells = 1.0;
  for (int k = 0; k < d; ++k) cells *= static_cast<double>(2 * box + 1);
  if (cells > 4.5e18) throw std::invalid_argument("FourierTable: box too large to index");
}

int64_t FourierTable::pack(std::span<const int64_t> xi) const {
  const int64_t base = 2 * box_radius + 1;
  int64_t key = 0;
  for (int k = 0; k < dim; ++k) key = key * base + (xi[static_cast<size_t>(k)] + box_radius);
  return key;
}

void FourierTable::unpack(int64_t key, std::span<int64_t> xi) const {
  const int64_t base = 2 * box_radius + 1;
  for (int k = dim - 1; k >= 0; --k) {
    xi[static_cast<size_t>(k)] = key % base - box_radius;
    key /= base;
  }
}

bool FourierTable::inside_box(std::span<const int64_t> xi) const {
  if (static_cast<int>(xi.size()) != dim) return false;
  for (int64_t c : xi)
    if (std::abs(c) > box_radius) return false;
  return true;
}

complexd FourierTable::at(std::span<const int64_t> xi) const {
  if (!inside_box(xi))
    throw CoverageError("frequency " + format_frequency(xi) + " outside table box " +
                            std::to_string(box_radius),
                        std::vector<int64_t>(xi.begin(), xi.end()));
  auto it = coeffs.find(pack(xi));
  return it == coeffs.end() ? complexd(0.0, 0.0) : it->second;
}

void FourierTable::set(std::span<const int64_t> xi, complexd value) {
  if (!inside_box(xi))
    throw CoverageError("frequency " + format_frequency(xi) + " outside table box " +
                            std::to_string(box_radius),
                        std::vector<int64_t>(xi.begin(), xi.end()));
  coeffs[pack(xi)] = value;
}

std::vector<int64_t> FourierTable::sorted_keys() const {
  std::vector<int64_t> keys;
  keys.reserve(coeffs.size());
  for (const auto& [k, v] : coeffs) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

void validate(const FourierTable& table) {
  if (table.dim < 1 || table.box_radius < 1)
    throw std::invalid_argument("fourier table: bad dimensions");
  std::vector<int64_t> zero(static_cast<size_t>(table.dim), 0);
  const complexd c0 = table.at(zero);
  if (std::abs(c0 - complexd(1.0, 0.0)) > kTableTol)
    throw std::invalid_argument("fourier table: coeff(0) != 1");
  std::vector<int64_t> xi(static_cast<size_t>(table.dim));
  std::vector<int64_t> neg(static_cast<size_t>(table.dim));
  for (const auto& [key, value] : table.coeffs) {
    if (std::abs(value) > 1.0 + kTableTol)
      throw std::invalid_argument("fourier table: |coeff| exceeds 1");
    table.unpack(key, xi);
    for (int k = 0; k < table.dim; ++k) neg[static_cast<size_t>(k)] = -xi[static_cast<size_t>(k)];
    if (std::abs(table.at(neg) - std::conj(value)) > kTableTol)
      throw std::invalid_argument("fourier table: Hermitian symmetry broken at " +
                                  format_frequency(xi));
  }
}

FourierTable transform(const AtomicMeasure& mu, int64_t box_radius) {
  if (box_radius < 1) throw std::invalid_argument("transform: box_radius must be >= 1");
  FourierTable table(mu.dim, box_radius);
  const int64_t base = 2 * box_radius + 1;
  const int64_t count = box_cell_count(mu.dim, box_radius);
  std::vector<complexd> dense(static_cast<size_t>(count), complexd(0.0, 0.0));

  std::vector<std::vector<complexd>> phases(static_cast<size_t>(mu.dim));
  for (size_t a = 0; a < mu.points.size(); ++a) {
    for (int k = 0; k < mu.dim; ++k)
      phases[static_cast<size_t>(k)] =
          axis_phases(mu.points[a][static_cast<size_t>(k)], box_radius);
    const double w = mu.weights[a];
    for (int64_t flat = 0; flat < count; ++flat) {
      complexd v = w;
      int64_t rem = flat;
      for (int k = mu.dim - 1; k >= 0; --k) {
        v *= phases[static_cast<size_t>(k)][static_cast<size_t>(rem % base)];
        rem /= base;
      }
      dense[static_cast<size_t>(flat)] += v;
    }
  }
  table.coeffs.reserve(static_cast<size_t>(count));
  for (int64_t flat = 0; flat < count; ++flat)
    table.coeffs.emplace(flat, dense[static_cast<size_t>(flat)]);
  return table;
}

FourierTable transform(const GridMeasure& mu, int64_t box_radius) {
  if (box_radius < 1) throw std::invalid_argument("transform: box_radius must be >= 1");
  const int64_t N = mu.resolution;
  if (2 * box_radius > N)
    throw std::invalid_argument(
        "transform: box_radius exceeds alias guard N/2 for grid resolution " + std::to_string(N));

  const int64_t cells = mu.cell_count();
  fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(cells));
  for (int64_t i = 0; i < cells; ++i) {
    buf[i][0] = mu.mass[static_cast<size_t>(i)];
    buf[i][1] = 0.0;
  }
  std::vector<int> dims(static_cast<size_t>(mu.dim), static_cast<int>(N));
  fftw_plan plan = fftw_plan_dft(mu.dim, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  const RootTable roots(2 * N);
  FourierTable table(mu.dim, box_radius);
  const int64_t base = 2 * box_radius + 1;
  const int64_t count = box_cell_count(mu.dim, box_radius);
  table.coeffs.reserve(static_cast<size_t>(count));

  // Digits of `flat` in most-significant-first order match the table's
  // row-major packing, so `flat` is already the packed key.
  std::vector<int64_t> digits(static_cast<size_t>(mu.dim));
  for (int64_t flat = 0; flat < count; ++flat) {
    int64_t rem = flat;
    int64_t grid_flat = 0;
    int64_t xi_sum = 0;
    for (int k = mu.dim - 1; k >= 0; --k) {
      digits[static_cast<size_t>(k)] = rem % base;
      rem /= base;
    }
    for (int k = 0; k < mu.dim; ++k) {
      const int64_t xi_k = digits[static_cast<size_t>(k)] - box_radius;
      xi_sum += xi_k;
      int64_t folded = xi_k % N;
      if (folded < 0) folded += N;
      grid_flat = grid_flat * N + folded;
    }
    const complexd raw(buf[grid_flat][0], buf[grid_flat][1]);
    table.coeffs.emplace(flat, roots(xi_sum) * raw);
  }
  fftw_free(buf);
  return table;
}

namespace {

void check_sublattice_args(int dim, const std::vector<int64_t>& q, int folds, int64_t t_max) {
  if (folds < 1) throw std::invalid_argument("transform_sublattice: folds must be >= 1");
  if (t_max < 1) throw std::invalid_argument("transform_sublattice: t_max must be >= 1");
  if (q.empty() || gcd_of(q) == 0)
    throw std::invalid_argument("transform_sublattice: q must be nonzero");
  if (dim != folds * static_cast<int>(q.size()))
    throw std::invalid_argument("transform_sublattice: measure dim != folds * dim(q)");
}

}  // namespace

FourierTable transform_sublattice(const AtomicMeasure& mu, const std::vector<int64_t>& q,
                                  int folds, int64_t t_max) {
  check_sublattice_args(mu.dim, q, folds, t_max);
  const int d = static_cast<int>(q.size());
  const int64_t q_sup = static_cast<int64_t>(sup_norm(q));
  FourierTable table(mu.dim, t_max * q_sup);
  table.meta["populated"] = "ray";

  const int64_t tb = 2 * t_max + 1;
  int64_t t_count = 1;
  for (int b = 0; b < folds; ++b) t_count *= tb;

  std::vector<complexd> dense(static_cast<size_t>(t_count), complexd(0.0, 0.0));
  std::vector<std::vector<complexd>> phases(static_cast<size_t>(folds));
  for (size_t a = 0; a < mu.points.size(); ++a) {
    for (int b = 0; b < folds; ++b) {
      double theta = 0.0;
      for (int k = 0; k < d; ++k)
        theta += static_cast<double>(q[static_cast<size_t>(k)]) *
                 mu.points[a][static_cast<size_t>(b * d + k)];
      phases[static_cast<size_t>(b)] = axis_phases(theta, t_max);
    }
    const double w = mu.weights[a];
    for (int64_t flat = 0; flat < t_count; ++flat) {
      complexd v = w;
      int64_t rem = flat;
      for (int b = folds - 1; b >= 0; --b) {
        v *= phases[static_cast<size_t>(b)][static_cast<size_t>(rem % tb)];
        rem /= tb;
      }
      dense[static_cast<size_t>(flat)] += v;
    }
  }

  std::vector<int64_t> xi(static_cast<size_t>(mu.dim));
  for (int64_t flat = 0; flat < t_count; ++flat) {
    int64_t rem = flat;
    std::vector<int64_t> t(static_cast<size_t>(folds));
    for (int b = folds - 1; b >= 0; --b) {
      t[static_cast<size_t>(b)] = rem % tb - t_max;
      rem /= tb;
    }
    for (int b = 0; b < folds; ++b)
      for (int k = 0; k < d; ++k)
        xi[static_cast<size_t>(b * d + k)] = t[static_cast<size_t>(b)] * q[static_cast<size_t>(k)];
    table.set(xi, dense[static_cast<size_t>(flat)]);
  }
  return table;
}

FourierTable transform_sublattice(const GridMeasure& mu, const std::vector<int64_t>& q,
                                  int folds, int64_t t_max) {
  check_sublattice_args(mu.dim, q, folds, t_max);
  const int d = static_cast<int>(q.size());
  const int64_t N = mu.resolution;
  const int64_t M = 2 * N;  // pushforward bins per fold

  // Push each cell's mass onto the exact value of q . x per fold. Cell
  // centers give q . x = (2 q.i + sum(q)) / (2N), an exact point of the
  // (1/2N)-lattice, so the histogram represents the pushforward measure with
  // no binning error and the small DFT below is the exact transform.
  int64_t bins = 1;
  for (int b = 0; b < folds; ++b) {
    if (bins > (int64_t{1} << 26)) throw std::invalid_argument("pushforward histogram too large");
    bins *= M;
  }
  int64_t q_sum = 0;
  for (int64_t c : q) q_sum += c;

  fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(bins));
  for (int64_t i = 0; i < bins; ++i) buf[i][0] = buf[i][1] = 0.0;

  const int64_t cells = mu.cell_count();
  std::vector<int64_t> idx(static_cast<size_t>(mu.dim));
  for (int64_t flat = 0; flat < cells; ++flat) {
    const double m = mu.mass[static_cast<size_t>(flat)];
    if (m == 0.0) continue;
    mu.decode(flat, idx);
    int64_t bin = 0;
    for (int b = 0; b < folds; ++b) {
      int64_t s = 0;
      for (int k = 0; k < d; ++k)
        s += q[static_cast<size_t>(k)] * idx[static_cast<size_t>(b * d + k)];
      int64_t u = (2 * s + q_sum) % M;
      if (u < 0) u += M;
      bin = bin * M + u;
    }
    buf[bin][0] += m;
  }

  std::vector<int> dims(static_cast<size_t>(folds), static_cast<int>(M));
  fftw_plan plan = fftw_plan_dft(folds, dims.data(), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  const int64_t q_sup = static_cast<int64_t>(sup_norm(q));
  FourierTable table(mu.dim, t_max * q_sup);
  table.meta["populated"] = "ray";

  const int64_t tb = 2 * t_max + 1;
  int64_t t_count = 1;
  for (int b = 0; b < folds; ++b) t_count *= tb;

  std::vector<int64_t> xi(static_cast<size_t>(mu.dim));
  std::vector<int64_t> t(static_cast<size_t>(folds));
  for (int64_t flat = 0; flat < t_count; ++flat) {
    int64_t rem = flat;
    for (int b = folds - 1; b >= 0; --b) {
      t[static_cast<size_t>(b)] = rem % tb - t_max;
      rem /= tb;
    }
    int64_t hist_flat = 0;
    for (int b = 0; b < folds; ++b) {
      int64_t folded = t[static_cast<size_t>(b)] % M;
      if (folded < 0) folded += M;
      hist_flat = hist_flat * M + folded;
    }
    for (int b = 0; b < folds; ++b)
      for (int k = 0; k < d; ++k)
        xi[static_cast<size_t>(b * d + k)] = t[static_cast<size_t>(b)] * q[static_cast<size_t>(k)];
    table.set(xi, complexd(buf[hist_flat][0], buf[hist_flat][1]));
  }
  fftw_free(buf);
  return table;
}

FourierTable synthetic_power_law(int dim, int64_t box_radius, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("synthetic_power_law: alpha must be >= 0");
  FourierTable table(dim, box_radius);
  const int64_t base = 2 * box_radius + 1;
  const int64_t count = box_cell_count(dim, box_radius);
  table.coeffs.reserve(static_cast<size_t>(count));
  std::vector<int64_t> xi(static_cast<size_t>(dim));
  for (int64_t flat = 0; flat < count; ++flat) {
    int64_t rem = flat;
    double norm2 = 0.0;
    for (int k = dim - 1; k >= 0; --k) {
      const int64_t c = rem % base - box_radius;
      norm2 += static_cast<double>(c) * static_cast<double>(c);
      rem /= base;
    }
    const double value = norm2 == 0.0 ? 1.0 : std::pow(std::sqrt(norm2), -alpha);
    table.coeffs.emplace(flat, complexd(value, 0.0));
  }
  return table;
}

std::vector<std::vector<int64_t>> lattice_multiple_freqs(int dim, int64_t Q, double radius) {
  if (dim < 1 || Q < 1) throw std::invalid_argument("lattice_multiple_freqs: bad arguments");
  const int64_t m_box = static_cast<int64_t>(std::floor(radius / static_cast<double>(Q)));
  std::vector<std::vector<int64_t>> out;
  if (m_box < 1) return out;
  const double r2 = (radius / static_cast<double>(Q)) * (radius / static_cast<double>(Q));
  const int64_t base = 2 * m_box + 1;
  int64_t count = 1;
  for (int k = 0; k < dim; ++k) count *= base;
  std::vector<int64_t> m(static_cast<size_t>(dim));
  for (int64_t flat = 0; flat < count; ++flat) {
    int64_t rem = flat;
    double norm2 = 0.0;
    bool zero = true;
    for (int k = dim - 1; k >= 0; --k) {
      const int64_t c = rem % base - m_box;
      m[static_cast<size_t>(k)] = c;
      norm2 += static_cast<double>(c) * static_cast<double>(c);
      if (c != 0) zero = false;
      rem /= base;
    }
    if (zero || norm2 > r2) continue;
    std::vector<int64_t> xi(static_cast<size_t>(dim));
    for (int k = 0; k < dim; ++k) xi[static_cast<size_t>(k)] = Q * m[static_cast<size_t>(k)];
    out.push_back(std::move(xi));
  }
  return out;
}

std::vector<std::vector<int64_t>> ray_freqs(const std::vector<int64_t>& q, int folds,
                                            int64_t t_max) {
  if (folds < 1 || t_max < 1 || q.empty() || gcd_of(q) == 0)
    throw std::invalid_argument("ray_freqs: bad arguments");
  const int d = static_cast<int>(q.size());
  const int64_t tb = 2 * t_max + 1;
  int64_t count = 1;
  for (int b = 0; b < folds; ++b) count *= tb;
  std::vector<std::vector<int64_t>> out;
  out.reserve(static_cast<size_t>(count - 1));
  std::vector<int64_t> t(static_cast<size_t>(folds));
  for (int64_t flat = 0; flat < count; ++flat) {
    int64_t rem = flat;
    bool zero = true;
    for (int b = folds - 1; b >= 0; --b) {
      t[static_cast<size_t>(b)] = rem % tb - t_max;
      if (t[static_cast<size_t>(b)] != 0) zero = false;
      rem /= tb;
    }
    if (zero) continue;
    std::vector<int64_t> xi(static_cast<size_t>(folds * d));
    for (int b = 0; b < folds; ++b)
      for (int k = 0; k < d; ++k)
        xi[static_cast<size_t>(b * d + k)] = t[static_cast<size_t>(b)] * q[static_cast<size_t>(k)];
    out.push_back(std::move(xi));
  }
  return out;
}

std::vector<std::vector<int64_t>> box_freqs(int dim, double radius, Norm norm,
                                            bool exclude_zero) {
  if (dim < 1 || radius < 0.0) throw std::invalid_argument("box_freqs: bad arguments");
  const int64_t b = static_cast<int64_t>(std::floor(radius));
  const int64_t base = 2 * b + 1;
  int64_t count = 1;
  for (int k = 0; k < dim; ++k) count *= base;
  std::vector<std::vector<int64_t>> out;
  std::vector<int64_t> xi(static_cast<size_t>(dim));
  for (int64_t flat = 0; flat < count; ++flat) {
    int64_t rem = flat;
    double norm2 = 0.0;
    bool zero = true;
    for (int k = dim - 1; k >= 0; --k) {
      const int64_t c = rem % base - b;
      xi[static_cast<size_t>(k)] = c;
      norm2 += static_cast<double>(c) * static_cast<double>(c);
      if (c != 0) zero = false;
      rem /= base;
    }
    if (zero && exclude_zero) continue;
    if (norm == Norm::kEuclid && norm2 > radius * radius) continue;
    out.push_back(xi);
  }
  return out;
}

complexd restricted_sum(const FourierTable& table,
                        const std::vector<std::vector<int64_t>>& freqs, bool magnitude_only) {
  complexd acc(0.0, 0.0);
  for (const auto& xi : freqs) {
    const complexd v = table.at(xi);
    if (magnitude_only)
      acc += std::abs(v);
    else
      acc += v;
  }
  return acc;
}

DecayProfile decay_profile(const FourierTable& table, double shell_base) {
  if (!(shell_base > 1.0)) throw std::invalid_argument("decay_profile: shell_base must be > 1");
  if (static_cast<double>(table.box_radius) < shell_base * shell_base)
    throw std::invalid_argument("decay_profile: table box smaller than shell_base^2");

  std::vector<double> radii;
  for (double r = shell_base; 2.0 * r <= static_cast<double>(table.box_radius) + 1.0;
       r *= shell_base)
    radii.push_back(r);
  if (radii.size() < 3) throw std::invalid_argument("decay_profile: fewer than 3 usable shells");

  std::vector<double> peaks(radii.size(), 0.0);
  std::vector<int64_t> xi(static_cast<size_t>(table.dim));
  for (const auto& [key, value] : table.coeffs) {
    table.unpack(key, xi);
    double norm2 = 0.0;
    for (int64_t c : xi) norm2 += static_cast<double>(c) * static_cast<double>(c);
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    const double mag = std::abs(value);
    for (size_t s = 0; s < radii.size(); ++s)
      if (norm >= radii[s] && norm < 2.0 * radii[s]) peaks[s] = std::max(peaks[s], mag);
  }

  DecayProfile profile;
  profile.cap = static_cast<double>(table.dim);
  size_t floored = 0;
  for (size_t s = 0; s < radii.size(); ++s) {
    const double peak = std::min(peaks[s], 1.0);
    profile.shells.emplace_back(radii[s], peak);
    if (peak < kPeakFloor) ++floored;
  }
  if (2 * floored > radii.size()) {
    profile.zero_dominated = true;
    profile.fitted_s = profile.cap;
    return profile;
  }
  std::vector<double> xs, ys;
  for (const auto& [r, peak] : profile.shells) {
    xs.push_back(std::log(r));
    ys.push_back(std::log(std::max(peak, kPeakFloor)));
  }
  const double slope = least_squares_slope(xs, ys);
  profile.fitted_s = std::clamp(-2.0 * slope, 0.0, profile.cap);
  return profile;
}

std::string table_to_json(const FourierTable& table) {
  nlohmann::json j;
  j["dim"] = table.dim;
  j["box_radius"] = table.box_radius;
  nlohmann::json entries = nlohmann::json::array();
  std::vector<int64_t> xi(static_cast<size_t>(table.dim));
  for (int64_t key : table.sorted_keys()) {
    table.unpack(key, xi);
    const complexd v = table.coeffs.at(key);
    entries.push_back({xi, v.real(), v.imag()});
  }
  j["entries"] = std::move(entries);
  nlohmann::json meta = nlohmann::json::object();
  for (const auto& [k, v] : table.meta) meta[k] = v;
  j["meta"] = std::move(meta);
  return j.dump();
}

FourierTable table_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  FourierTable table(j.at("dim").get<int>(), j.at("box_radius").get<int64_t>());
  for (const auto& entry : j.at("entries")) {
    const auto xi = entry.at(0).get<std::vector<int64_t>>();
    table.set(xi, complexd(entry.at(1).get<double>(), entry.at(2).get<double>()));
  }
  if (j.contains("meta"))
    for (auto it = j.at("meta").begin(); it != j.at("meta").end(); ++it)
      table.meta[it.key()] = it.value().get<std::string>();
  return table;
}

std::string decay_profile_to_csv(const DecayProfile& profile) {
  nlohmann::json probe;  // reuse json's shortest-round-trip double formatting
  std::ostringstream os;
  os << "radius,peak\r\n";
  for (const auto& [r, peak] : profile.shells) {
    probe = r;
    os << probe.dump() << ",";
    probe = peak;
    os << probe.dump() << "\r\n";
  }
  return os.str();
}

}  // namespace salemlab
