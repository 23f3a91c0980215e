// Acceptance suite: one pass/fail line per criterion. Exit code = number of
// failed criteria. argv[1] = path to the CLI binary (used by the determinism
// criterion); argv[2] optionally restricts the run to a single criterion.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "salemlab/bounds.hpp"
#include "salemlab/bump.hpp"
#include "salemlab/fourier.hpp"
#include "salemlab/lattice.hpp"
#include "salemlab/measure.hpp"

using namespace salemlab;
namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

// --- criterion 1: plane Fourier identity ---

Outcome criterion_plane_identity() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int64_t pairs = 0;

  auto check_pair = [&](const PlaneUnionMeasure& pm, const std::vector<int64_t>& k) {
    const double closed = plane_fourier_coefficient(pm, k);
    const complexd numeric = plane_fourier_quadrature(pm, k, 512);
    const double gap = std::abs(numeric - complexd(closed, 0.0));
    worst = std::max(worst, gap);
    ++pairs;
    if (gap >= 1e-5) out.pass = false;
  };

  // d = 2: every primitive q with |q|_inf <= 5.
  for (int64_t a = -5; a <= 5; ++a) {
    for (int64_t b = -5; b <= 5; ++b) {
      const std::vector<int64_t> q{a, b};
      if ((a == 0 && b == 0) || gcd_of(q) != 1) continue;
      const PlaneUnionMeasure pm{2, q};
      for (int64_t t : {-2, -1, 0, 1, 2}) check_pair(pm, {t * a, t * b});
      check_pair(pm, {a + 1, b});
      check_pair(pm, {a, b - 1});
      check_pair(pm, {1, 0});
      check_pair(pm, {0, 1});
    }
  }
  // d = 3: every primitive q with |q|_inf <= 3.
  for (int64_t a = -3; a <= 3; ++a) {
    for (int64_t b = -3; b <= 3; ++b) {
      for (int64_t c = -3; c <= 3; ++c) {
        const std::vector<int64_t> q{a, b, c};
        if ((a == 0 && b == 0 && c == 0) || gcd_of(q) != 1) continue;
        const PlaneUnionMeasure pm{3, q};
        check_pair(pm, {0, 0, 0});
        check_pair(pm, q);
        check_pair(pm, {a + 1, b, c});
        check_pair(pm, {0, 1, 1});
      }
    }
  }

  const double elapsed = seconds_since(start);
  if (elapsed >= 30.0) out.pass = false;
  out.detail << pairs << " (q,k) pairs at mesh 512, worst gap " << worst << ", " << elapsed
             << " s (< 30 s)";
  return out;
}

// --- criterion 2: Parseval battery ---

Outcome criterion_parseval() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const auto reports = run_parseval_battery(1e-6);
  double worst = 0.0;
  for (const auto& rep : reports) {
    worst = std::max(worst, rep.ratio);
    if (rep.verdict != Verdict::kConsistent) out.pass = false;
  }
  if (reports.size() < 20) out.pass = false;
  const double elapsed = seconds_since(start);
  if (elapsed >= 60.0) out.pass = false;
  out.detail << reports.size() << " cases, worst relative gap " << worst << " (< 1e-6), "
             << elapsed << " s (< 60 s)";
  return out;
}

// --- criterion 3: lattice neighborhood scaling ---

Outcome criterion_scaling() {
  Outcome out;
  double worst_rel = 0.0;
  const GridMeasure line = make_uniform_grid(1, 4096);
  const GridMeasure square = make_uniform_grid(2, 2048);
  for (double delta : {0.2, 0.1, 0.05}) {
    for (int64_t Q : {3, 7, 10}) {
      const double r1 =
          measure_of_lattice_neighborhood(line, {1, Q, delta}).value / delta;
      const double rel1 = std::fabs(r1 - 2.0) / 2.0;
      const double r2 =
          measure_of_lattice_neighborhood(square, {2, Q, delta}).value / (delta * delta);
      const double rel2 = std::fabs(r2 - M_PI) / M_PI;
      worst_rel = std::max({worst_rel, rel1, rel2});
      if (rel1 >= 0.05 || rel2 >= 0.05) out.pass = false;
    }
  }
  out.detail << "mu(A(delta,Q))/delta^n vs v_1=2, v_2=pi over the 3x3 grid; worst relative "
                "deviation "
             << worst_rel << " (< 0.05)";
  return out;
}

// --- criterion 4: counting-bound battery ---

Outcome criterion_battery() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  BatteryConfig config;
  config.seeds = 20;
  const auto reports = run_default_battery(config);
  int violations = 0;
  std::map<std::string, double> worst;
  for (const auto& rep : reports) {
    if (rep.verdict == Verdict::kViolated) ++violations;
    if (rep.verdict == Verdict::kConsistent)
      worst[rep.name] = std::max(worst[rep.name], rep.ratio);
  }
  if (violations > 0) out.pass = false;
  out.detail << reports.size() << " reports over 20 seeds x 3 profiles, " << violations
             << " violations; empirical worst ratios:";
  for (const auto& [name, ratio] : worst) out.detail << " " << name << "=" << ratio;
  out.detail << "; " << seconds_since(start) << " s";
  return out;
}

// --- criterion 5: tail envelopes ---

Outcome criterion_tails() {
  Outcome out;
  for (int n : {1, 2}) {
    const LinearFormSpec spec{2, {2, 1}, 0.25, n};
    const BumpProfile band{BumpKind::kBandLimited, spec.delta_star(), 2, 2.0};
    const BumpProfile compact{BumpKind::kCompactSupport, spec.delta_star(), 2, 2.0};
    // Band edge in t for this spec: largest t with delta_star * t * 2 < 2.
    const int64_t band_edge = band_limited_t_cutoff(band, spec.delta_star(), spec.q);
    for (int N : {2, 4, 8}) {
      for (double K : {2.0, 4.0, 8.0}) {
        const BoundReport b = tail_envelope(band, spec, K, N);
        const bool beyond = std::ceil(K / spec.delta) > static_cast<double>(band_edge);
        if (beyond && b.lhs != 0.0) out.pass = false;
        if (!beyond && b.lhs == 0.0) out.pass = false;
        const BoundReport c = tail_envelope(compact, spec, K, N);
        if (c.verdict != Verdict::kConsistent) out.pass = false;
        if (!(c.lhs <= c.rhs_main * (1.0 + 1e-9))) out.pass = false;
        if (std::fabs(c.tail - std::pow(K, -N)) > 1e-15 * c.tail) out.pass = false;
      }
    }
  }
  out.detail << "band-limited tail vanishes exactly past the band edge; compact tails below "
                "the measured envelope for N in {2,4,8}, K in {2,4,8}, n in {1,2}";
  return out;
}

// --- criterion 6: Borel-Cantelli scans ---

Outcome criterion_borel_cantelli() {
  Outcome out;
  const GridMeasure mu = make_uniform_grid(1, 4096);
  const FourierTable table = transform(mu, 2048);

  const SeriesReport convergent = borel_cantelli_scan(table, 2.0, 10000, ScanMode::kLattice);
  const double sum = convergent.partial_sums.back().second;
  const double target = M_PI * M_PI / 3.0;
  if (std::fabs(sum - target) >= 1e-3) out.pass = false;
  if (convergent.classified != SeriesClass::kConverging) out.pass = false;

  const SeriesReport harmonic = borel_cantelli_scan(table, 1.0, 4000, ScanMode::kLattice);
  if (harmonic.classified != SeriesClass::kDiverging) out.pass = false;

  // Synthetic power-law tables classified by the closed-form exponent sign.
  struct Case {
    double alpha, tau_prime;
    int64_t box;
  };
  int synthetic_ok = 0;
  const std::vector<Case> cases = {{1.0 / 3.0, 1.1, 6000},
                                   {0.9, 1.4, 14100},
                                   {0.2, 0.9, 2400},
                                   {0.8, 1.8, 30000}};
  for (const Case& c : cases) {
    const FourierTable synth = synthetic_power_law(1, c.box, c.alpha);
    const SeriesReport rep = borel_cantelli_scan(synth, c.tau_prime, 40, ScanMode::kLattice);
    const double e_closed = std::max(-c.tau_prime, -c.alpha * (1.0 + c.tau_prime));
    const SeriesClass expected = e_closed < -1.05
                                     ? SeriesClass::kConverging
                                     : (e_closed >= -1.0 ? SeriesClass::kDiverging
                                                         : SeriesClass::kInconclusive);
    if (rep.classified == expected)
      ++synthetic_ok;
    else
      out.pass = false;
  }
  out.detail << "uniform tau'=2 partial sum " << sum << " vs pi^2/3 = " << target
             << " (|gap| < 1e-3); tau'=1 diverging; " << synthetic_ok << "/" << cases.size()
             << " synthetic classifications match the exponent sign";
  return out;
}

// --- criterion 7: badness constants ---

Outcome criterion_badness() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  const double golden = badness_limit(std::vector<double>{0.6180339887498949}, 100000);
  const double golden_elapsed = seconds_since(start);
  const auto start2 = std::chrono::steady_clock::now();
  const double silver = badness_limit(std::vector<double>{std::sqrt(2.0) - 1.0}, 100000);
  const double silver_elapsed = seconds_since(start2);
  if (std::fabs(golden - 0.4472) >= 0.005) out.pass = false;
  if (std::fabs(silver - 0.3536) >= 0.005) out.pass = false;
  if (golden_elapsed >= 5.0 || silver_elapsed >= 5.0) out.pass = false;
  out.detail << "golden " << golden << " vs 1/sqrt(5) = " << 1.0 / std::sqrt(5.0) << "; sqrt(2)-1 "
             << silver << " vs 1/(2 sqrt 2) = " << 1.0 / (2.0 * std::sqrt(2.0))
             << "; +-0.005, runtimes " << golden_elapsed << " s / " << silver_elapsed
             << " s (< 5 s each)";
  return out;
}

// --- criterion 8: decay-ceiling evidence for approximant measures ---

Outcome criterion_witness() {
  Outcome out;
  const double tau = 1.0;
  const double ceiling = 2.0 * 1.0 / (1.0 + tau);
  double worst = 0.0;
  struct Config {
    std::vector<std::vector<int64_t>> q_set;
    int64_t resolution;
    int depth;
  };
  const std::vector<Config> configs = {
      {{{3}, {4}, {5}, {6}, {7}, {8}}, 512, 1},
      {{{3}, {5}, {7}, {11}}, 512, 1},
      {{{3}, {5}, {7}, {9}}, 512, 1},
      {{{3}, {4}, {5}, {6}, {7}, {8}, {9}, {10}}, 512, 2},
      {{{3}, {4}, {5}}, 768, 1},
  };
  for (const Config& c : configs) {
    ApproximantParams params;
    params.tau = tau;
    params.d = 1;
    params.folds = 2;
    params.q_set = c.q_set;
    params.resolution = c.resolution;
    params.tower_depth = c.depth;
    const GridMeasure mu = approximant_measure(params);
    // The finite truncation only mimics the lim sup set below its resonant
    // reach ~ q_max^2 / 2; past that the union of fat slabs is absolutely
    // continuous and its spectrum drops faster than any set-supported
    // measure's could. The evidence window is matched to that reach.
    const int64_t q_max = static_cast<int64_t>(sup_norm(c.q_set.back()));
    const int64_t box =
        std::clamp<int64_t>(q_max * q_max / 2, 8, params.resolution / 2);
    const GridMeasure& witness_mu = mu;
    const BoundReport rep = non_salem_witness(tau, 1, 2, witness_mu, box, 1.5, 0.15);
    worst = std::max(worst, rep.lhs);
    if (rep.verdict != Verdict::kConsistent) out.pass = false;
  }
  out.detail << configs.size() << " approximant configurations (d=1, n=2, tau=1); worst "
                "fitted_s "
             << worst << " vs ceiling " << ceiling
             << " + 0.15 slack over reach-matched windows; evidence check only, the exact "
                "value is not reproducible numerically";
  return out;
}

// --- criterion 9: CLI determinism ---

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion_determinism(const std::string& cli) {
  Outcome out;
  if (cli.empty()) {
    out.pass = false;
    out.detail << "CLI path not supplied";
    return out;
  }
  const fs::path work = fs::temp_directory_path() / "salemlab_determinism";
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path cfg = work / "config.json";
  {
    std::ofstream os(cfg);
    os << R"({"measure": {"kind": "random", "d": 2, "N": 64, "seed": 5,
              "profile": "rough-density"}, "box": 16})";
  }
  auto run = [&](const std::string& sub, const fs::path& dir, const std::string& extra) {
    std::ostringstream cmd;
    cmd << cli << " " << sub << " --config " << cfg << " --out " << dir << extra
        << " > /dev/null 2>&1";
    return std::system(cmd.str().c_str());
  };
  bool all_equal = true;
  int files = 0;
  for (const std::string& sub : {std::string("transform"), std::string("badness")}) {
    const fs::path d1 = work / (sub + "_1");
    const fs::path d2 = work / (sub + "_2");
    if (run(sub, d1, " --seed 5") != 0 || run(sub, d2, " --seed 5") != 0) {
      out.pass = false;
      out.detail << sub << " run failed; ";
      continue;
    }
    for (const auto& entry : fs::directory_iterator(d1)) {
      ++files;
      const auto name = entry.path().filename();
      if (slurp(entry.path()) != slurp(d2 / name)) {
        all_equal = false;
        out.detail << "mismatch in " << name << "; ";
      }
    }
  }
  if (!all_equal || files == 0) out.pass = false;
  out.detail << files << " artifacts byte-identical across repeated runs";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const int only = argc > 2 ? std::atoi(argv[2]) : 0;

  struct Criterion {
    int index;
    const char* title;
    Outcome (*run)();
  };

  int failures = 0;
  auto report = [&](int index, const char* title, const Outcome& outcome) {
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << index << ": " << title
              << " -- " << outcome.detail.str() << "\n";
    if (!outcome.pass) ++failures;
  };

  const std::vector<Criterion> criteria = {
      {1, "plane Fourier identity (closed form vs quadrature)", criterion_plane_identity},
      {2, "Parseval pairing battery", criterion_parseval},
      {3, "lattice neighborhood volume scaling", criterion_scaling},
      {4, "counting-bound battery, zero violations", criterion_battery},
      {5, "tail envelopes (band-limited exact zero, compact measured)", criterion_tails},
      {6, "Borel-Cantelli scans and classifications", criterion_borel_cantelli},
      {7, "badness constants", criterion_badness},
      {8, "approximant decay ceiling (evidence)", criterion_witness},
  };

  for (const auto& c : criteria) {
    if (only != 0 && only != c.index) continue;
    report(c.index, c.title, c.run());
  }
  if (only == 0 || only == 9)
    report(9, "CLI determinism (byte-identical artifacts)", criterion_determinism(cli));

  if (failures == 0)
    std::cout << "all criteria passed\n";
  else
    std::cout << failures << " criteria failed\n";
  return failures;
}
