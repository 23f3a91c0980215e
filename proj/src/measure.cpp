#include "salemlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace salemlab {

namespace {

constexpr double kMassTol = 1e-12;

int64_t checked_pow(int64_t base, int exp) {
  int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (int64_t{1} << 40)) throw std::invalid_argument("grid too large");
    r *= base;
  }
  return r;
}

}  // namespace

int64_t GridMeasure::cell_count() const { return checked_pow(resolution, dim); }

double GridMeasure::total_mass() const {
  double s = 0.0;
  for (double m : mass) s += m;
  return s;
}

void GridMeasure::decode(int64_t flat, std::span<int64_t> idx) const {
  for (int k = dim - 1; k >= 0; --k) {
    idx[static_cast<size_t>(k)] = flat % resolution;
    flat /= resolution;
  }
}

void validate(const AtomicMeasure& mu) {
  if (mu.dim < 1) throw std::invalid_argument("atomic measure: dim must be >= 1");
  if (mu.points.empty()) throw std::invalid_argument("atomic measure: no atoms");
  if (mu.points.size() != mu.weights.size())
    throw std::invalid_argument("atomic measure: points/weights size mismatch");
  double total = 0.0;
  for (size_t a = 0; a < mu.points.size(); ++a) {
    if (static_cast<int>(mu.points[a].size()) != mu.dim)
      throw std::invalid_argument("atomic measure: point dimension mismatch");
    for (double c : mu.points[a])
      if (!(c >= 0.0 && c < 1.0)) throw std::invalid_argument("atomic measure: point not in [0,1)");
    if (mu.weights[a] < 0.0) throw std::invalid_argument("atomic measure: negative weight");
    total += mu.weights[a];
  }
  if (std::fabs(total - 1.0) > kMassTol)
    throw std::invalid_argument("atomic measure: weights do not sum to 1");
}

void validate(const GridMeasure& mu) {
  if (mu.dim < 1) throw std::invalid_argument("grid measure: dim must be >= 1");
  if (mu.resolution < 1) throw std::invalid_argument("grid measure: resolution must be >= 1");
  if (static_cast<int64_t>(mu.mass.size()) != mu.cell_count())
    throw std::invalid_argument("grid measure: mass array extent mismatch");
  for (double m : mu.mass)
    if (m < 0.0) throw std::invalid_argument("grid measure: negative cell mass");
  if (std::fabs(mu.total_mass() - 1.0) > kMassTol)
    throw std::invalid_argument("grid measure: total mass is not 1");
}

AtomicMeasure make_atomic(const std::vector<std::vector<double>>& points,
                          const std::vector<double>& weights) {
  if (points.empty()) throw std::invalid_argument("make_atomic: empty input");
  if (points.size() != weights.size())
    throw std::invalid_argument("make_atomic: points/weights size mismatch");
  AtomicMeasure mu;
  mu.dim = static_cast<int>(points[0].size());
  if (mu.dim < 1) throw std::invalid_argument("make_atomic: zero-dimensional point");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("make_atomic: negative weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("make_atomic: weights all zero");
  mu.points.reserve(points.size());
  for (const auto& p : points) {
    if (static_cast<int>(p.size()) != mu.dim)
      throw std::invalid_argument("make_atomic: dimension mismatch");
    std::vector<double> q(p.size());
    for (size_t k = 0; k < p.size(); ++k) q[k] = torus_frac(p[k]);
    mu.points.push_back(std::move(q));
  }
  mu.weights.resize(weights.size());
  for (size_t a = 0; a < weights.size(); ++a) mu.weights[a] = weights[a] / total;
  return mu;
}

AtomicMeasure point_mass(const std::vector<double>& point) {
  return make_atomic({point}, {1.0});
}

GridMeasure make_uniform_grid(int d, int64_t N) {
  if (d < 1) throw std::invalid_argument("make_uniform_grid: d must be >= 1");
  if (N < 2) throw std::invalid_argument("make_uniform_grid: N must be >= 2");
  GridMeasure mu;
  mu.dim = d;
  mu.resolution = N;
  const int64_t cells = mu.cell_count();
  mu.mass.assign(static_cast<size_t>(cells), 1.0 / static_cast<double>(cells));
  return mu;
}

double localize_profile(double dist, double radius) {
  if (dist <= radius) return 1.0;
  if (dist >= 2.0 * radius) return 0.0;
  const double t = (dist - radius) / radius;
  const double u = 1.0 - t * t;
  return u * u;
}

GridMeasure localize(const GridMeasure& mu, const std::vector<double>& center, double radius) {
  if (static_cast<int>(center.size()) != mu.dim)
    throw std::invalid_argument("localize: center dimension mismatch");
  if (radius <= 0.0) throw std::invalid_argument("localize: radius must be positive");
  GridMeasure out = mu;
  const int64_t cells = mu.cell_count();
  std::vector<int64_t> idx(static_cast<size_t>(mu.dim));
  double ball_mass = 0.0;
  double total = 0.0;
  for (int64_t flat = 0; flat < cells; ++flat) {
    mu.decode(flat, idx);
    double s = 0.0;
    for (int k = 0; k < mu.dim; ++k) {
      const double d = dist_to_int(mu.center_coord(idx[static_cast<size_t>(k)]) -
                                   center[static_cast<size_t>(k)]);
      s += d * d;
    }
    const double dist = std::sqrt(s);
    if (dist <= radius) ball_mass += mu.mass[static_cast<size_t>(flat)];
    const double scaled = mu.mass[static_cast<size_t>(flat)] * localize_profile(dist, radius);
    out.mass[static_cast<size_t>(flat)] = scaled;
    total += scaled;
  }
  if (ball_mass <= 0.0)
    throw std::domain_error("localize: ball carries zero mass");
  for (double& m : out.mass) m /= total;
  return out;
}

GridMeasure random_measure(int d, int64_t N, uint64_t seed, RandomProfile profile) {
  if (d < 1) throw std::invalid_argument("random_measure: d must be >= 1");
  if (N < 2) throw std::invalid_argument("random_measure: N must be >= 2");
  GridMeasure mu;
  mu.dim = d;
  mu.resolution = N;
  const int64_t cells = mu.cell_count();
  mu.mass.assign(static_cast<size_t>(cells), 0.0);
  Rng rng(seed * 3 + static_cast<uint64_t>(profile));

  switch (profile) {
    case RandomProfile::kSparseAtoms: {
      const int64_t per_axis = static_cast<int64_t>(std::ceil(std::sqrt(static_cast<double>(N))));
      const int64_t draws = checked_pow(per_axis, d);
      for (int64_t i = 0; i < draws; ++i) {
        const uint64_t cell = rng.next_below(static_cast<uint64_t>(cells));
        mu.mass[cell] += 0.1 + rng.next_double();
      }
      break;
    }
    case RandomProfile::kRoughDensity: {
      for (double& m : mu.mass) m = rng.next_double();
      break;
    }
    case RandomProfile::kSmoothDensity: {
      for (double& m : mu.mass) m = 0.75 + 0.5 * rng.next_double();
      // Periodic separable box blur; three passes smooth the field while the
      // density stays within a mild band around its mean.
      const int64_t window = std::max<int64_t>(3, (N / 8) | 1);
      const int64_t half = window / 2;
      std::vector<double> scratch(mu.mass.size());
      for (int pass = 0; pass < 3; ++pass) {
        for (int axis = 0; axis < d; ++axis) {
          int64_t stride = 1;
          for (int k = axis + 1; k < d; ++k) stride *= N;
          const int64_t lines = cells / N;
          for (int64_t line = 0; line < lines; ++line) {
            // Base flat index of this line: expand `line` over all axes except `axis`.
            int64_t rem = line, base = 0;
            for (int k = d - 1; k >= 0; --k) {
              if (k == axis) continue;
              int64_t s = 1;
              for (int j = k + 1; j < d; ++j) s *= N;
              base += (rem % N) * s;
              rem /= N;
            }
            double sum = 0.0;
            for (int64_t j = -half; j <= half; ++j) {
              int64_t jj = (j % N + N) % N;
              sum += mu.mass[static_cast<size_t>(base + jj * stride)];
            }
            for (int64_t i = 0; i < N; ++i) {
              scratch[static_cast<size_t>(base + i * stride)] = sum / static_cast<double>(window);
              const int64_t drop = ((i - half) % N + N) % N;
              const int64_t add = ((i + half + 1) % N + N) % N;
              sum -= mu.mass[static_cast<size_t>(base + drop * stride)];
              sum += mu.mass[static_cast<size_t>(base + add * stride)];
            }
          }
          mu.mass.swap(scratch);
        }
      }
      break;
    }
  }

  double total = mu.total_mass();
  if (total <= 0.0) {
    mu.mass[0] = 1.0;
    total = 1.0;
  }
  for (double& m : mu.mass) m /= total;
  return mu;
}

GridMeasure approximant_measure(const ApproximantParams& params) {
  if (params.q_set.empty()) throw std::invalid_argument("approximant_measure: empty q_set");
  if (params.d < 1 || params.folds < 1)
    throw std::invalid_argument("approximant_measure: d and folds must be >= 1");
  if (params.tower_depth < 1)
    throw std::invalid_argument("approximant_measure: tower_depth must be >= 1");

  auto delta_of = [&](std::span<const int64_t> q) {
    if (params.delta_rule) return params.delta_rule(q);
    return std::pow(sup_norm(q), -params.tau);
  };

  double min_delta = 1.0;
  double max_q = 0.0;
  for (const auto& q : params.q_set) {
    if (static_cast<int>(q.size()) != params.d)
      throw std::invalid_argument("approximant_measure: q dimension mismatch");
    if (gcd_of(q) == 0) throw std::invalid_argument("approximant_measure: q must be nonzero");
    const double delta = delta_of(q);
    if (!(delta > 0.0 && delta < 0.5))
      throw std::invalid_argument("approximant_measure: delta rule must land in (0, 1/2)");
    min_delta = std::min(min_delta, delta);
    max_q = std::max(max_q, sup_norm(q));
  }
  const int64_t N = params.resolution;
  if (static_cast<double>(N) < 4.0 * max_q / min_delta)
    throw std::invalid_argument("approximant_measure: resolution too coarse for thinnest slab");

  // Sort by |q|_inf and split into tower_depth contiguous layers.
  std::vector<std::vector<int64_t>> sorted = params.q_set;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return sup_norm(a) < sup_norm(b);
  });
  const int depth = std::min<int>(params.tower_depth, static_cast<int>(sorted.size()));
  std::vector<std::vector<std::vector<int64_t>>> layers(static_cast<size_t>(depth));
  for (size_t i = 0; i < sorted.size(); ++i)
    layers[i * static_cast<size_t>(depth) / sorted.size()].push_back(sorted[i]);

  GridMeasure mu;
  mu.dim = params.d * params.folds;
  mu.resolution = N;
  const int64_t cells = mu.cell_count();
  mu.mass.assign(static_cast<size_t>(cells), 0.0);

  std::vector<int64_t> idx(static_cast<size_t>(mu.dim));
  int64_t supported = 0;
  for (int64_t flat = 0; flat < cells; ++flat) {
    mu.decode(flat, idx);
    bool in_all_layers = true;
    for (const auto& layer : layers) {
      bool in_union = false;
      for (const auto& q : layer) {
        const double delta = delta_of(q);
        bool all_blocks = true;
        for (int b = 0; b < params.folds && all_blocks; ++b) {
          double form = 0.0;
          for (int k = 0; k < params.d; ++k)
            form += static_cast<double>(q[static_cast<size_t>(k)]) *
                    mu.center_coord(idx[static_cast<size_t>(b * params.d + k)]);
          all_blocks = dist_to_int(form) < delta;
        }
        if (all_blocks) {
          in_union = true;
          break;
        }
      }
      if (!in_union) {
        in_all_layers = false;
        break;
      }
    }
    if (in_all_layers) {
      mu.mass[static_cast<size_t>(flat)] = 1.0;
      ++supported;
    }
  }
  if (supported == 0)
    throw std::domain_error("approximant_measure: empty intersection at this resolution");
  for (double& m : mu.mass) m /= static_cast<double>(supported);
  return mu;
}

// --- JSON ---

namespace {

nlohmann::json meta_to_json(const std::map<std::string, std::string>& meta) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

std::map<std::string, std::string> meta_from_json(const nlohmann::json& j) {
  std::map<std::string, std::string> meta;
  if (j.is_object())
    for (auto it = j.begin(); it != j.end(); ++it) meta[it.key()] = it.value().get<std::string>();
  return meta;
}

}  // namespace

std::string measure_to_json(const AtomicMeasure& mu) {
  nlohmann::json j;
  j["dim"] = mu.dim;
  nlohmann::json atoms = nlohmann::json::array();
  for (size_t a = 0; a < mu.points.size(); ++a)
    atoms.push_back({{"point", mu.points[a]}, {"weight", mu.weights[a]}});
  j["atoms"] = std::move(atoms);
  j["meta"] = meta_to_json(mu.meta);
  return j.dump();
}

std::string measure_to_json(const GridMeasure& mu) {
  nlohmann::json j;
  j["dim"] = mu.dim;
  j["resolution"] = mu.resolution;
  j["mass"] = mu.mass;  // flat, row-major
  j["meta"] = meta_to_json(mu.meta);
  return j.dump();
}

bool measure_from_json(const std::string& text, AtomicMeasure& atomic, GridMeasure& grid) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.contains("atoms")) {
    atomic = AtomicMeasure{};
    atomic.dim = j.at("dim").get<int>();
    for (const auto& entry : j.at("atoms")) {
      atomic.points.push_back(entry.at("point").get<std::vector<double>>());
      atomic.weights.push_back(entry.at("weight").get<double>());
    }
    if (j.contains("meta")) atomic.meta = meta_from_json(j.at("meta"));
    validate(atomic);
    return true;
  }
  grid = GridMeasure{};
  grid.dim = j.at("dim").get<int>();
  grid.resolution = j.at("resolution").get<int64_t>();
  grid.mass = j.at("mass").get<std::vector<double>>();
  if (j.contains("meta")) grid.meta = meta_from_json(j.at("meta"));
  validate(grid);
  return false;
}

}  // namespace salemlab
