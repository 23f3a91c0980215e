// salemlab: reproducible experiments on torus measures, their Fourier decay,
// and the lattice/linear-form counting inequalities.
//
// Subcommands: transform | verify | parseval | borel-cantelli | badness | witness
// Every run is a pure function of (config, flags); artifacts are UTF-8 JSON
// and RFC 4180 CSV. Exit codes: 0 ok, 1 violation, 2 usage/config error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "salemlab/bounds.hpp"
#include "salemlab/fourier.hpp"
#include "salemlab/measure.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace salemlab;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<int64_t> seed;
  std::optional<double> budget;
  std::optional<int64_t> box;
  std::optional<int64_t> grid;
  bool strict = false;
};

json load_config(const CommonFlags& flags) {
  if (flags.config_path.empty()) return json::object();
  std::ifstream in(flags.config_path);
  if (!in) throw std::runtime_error("cannot open config file: " + flags.config_path);
  json cfg;
  in >> cfg;
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (j.contains(key)) return j.at(key).get<T>();
  return fallback;
}

RandomProfile parse_profile(const std::string& name) {
  if (name == "sparse-atoms") return RandomProfile::kSparseAtoms;
  if (name == "rough-density") return RandomProfile::kRoughDensity;
  if (name == "smooth-density") return RandomProfile::kSmoothDensity;
  throw std::runtime_error("unknown random profile: " + name);
}

struct BuiltMeasure {
  bool is_atomic = false;
  AtomicMeasure atomic;
  GridMeasure grid;

  int dim() const { return is_atomic ? atomic.dim : grid.dim; }
  int64_t resolution() const { return is_atomic ? 0 : grid.resolution; }
  std::string to_json_text() const {
    return is_atomic ? measure_to_json(atomic) : measure_to_json(grid);
  }
};

BuiltMeasure build_measure(const json& spec, const CommonFlags& flags) {
  BuiltMeasure out;
  const std::string kind = get_or<std::string>(spec, "kind", "uniform");
  const int64_t N = flags.grid.value_or(get_or<int64_t>(spec, "N", 256));
  if (kind == "uniform") {
    out.grid = make_uniform_grid(get_or<int>(spec, "d", 1), N);
    out.grid.meta["kind"] = "uniform";
  } else if (kind == "point") {
    out.is_atomic = true;
    out.atomic = point_mass(spec.at("point").get<std::vector<double>>());
    out.atomic.meta["kind"] = "point";
  } else if (kind == "atoms") {
    out.is_atomic = true;
    out.atomic = make_atomic(spec.at("points").get<std::vector<std::vector<double>>>(),
                             spec.at("weights").get<std::vector<double>>());
    out.atomic.meta["kind"] = "atoms";
  } else if (kind == "random") {
    const auto seed =
        static_cast<uint64_t>(flags.seed.value_or(get_or<int64_t>(spec, "seed", 1)));
    const auto profile = parse_profile(get_or<std::string>(spec, "profile", "smooth-density"));
    out.grid = random_measure(get_or<int>(spec, "d", 1), N, seed, profile);
    out.grid.meta["kind"] = "random";
    out.grid.meta["seed"] = std::to_string(seed);
    out.grid.meta["profile"] = get_or<std::string>(spec, "profile", "smooth-density");
  } else if (kind == "approximant") {
    ApproximantParams params;
    params.tau = get_or<double>(spec, "tau", 2.0);
    params.d = get_or<int>(spec, "d", 1);
    params.folds = get_or<int>(spec, "folds", 1);
    params.q_set = spec.at("q_set").get<std::vector<std::vector<int64_t>>>();
    params.resolution = flags.grid.value_or(get_or<int64_t>(spec, "resolution", 64));
    params.tower_depth = get_or<int>(spec, "tower_depth", 1);
    out.grid = approximant_measure(params);
    out.grid.meta["kind"] = "approximant";
    out.grid.meta["tau"] = json(params.tau).dump();
  } else if (kind == "file") {
    std::ifstream in(spec.at("path").get<std::string>());
    if (!in) throw std::runtime_error("cannot open measure file");
    std::stringstream ss;
    ss << in.rdbuf();
    out.is_atomic = measure_from_json(ss.str(), out.atomic, out.grid);
  } else {
    throw std::runtime_error("unknown measure kind: " + kind);
  }
  return out;
}

int cmd_transform(const CommonFlags& flags) {
  const json cfg = load_config(flags);
  const json mspec = cfg.contains("measure") ? cfg.at("measure") : json::object();
  BuiltMeasure mu = build_measure(mspec, flags);

  int64_t box = flags.box.value_or(get_or<int64_t>(cfg, "box", 0));
  if (box <= 0) {
    if (mu.is_atomic)
      box = mu.dim() == 1 ? 1024 : 64;
    else
      box = std::min<int64_t>(mu.grid.resolution / 2, mu.dim() == 1 ? 1024 : 128);
  }
  const double shell_base = get_or<double>(cfg, "shell_base", 1.5);

  FourierTable table = mu.is_atomic ? transform(mu.atomic, box) : transform(mu.grid, box);
  const DecayProfile profile = decay_profile(table, shell_base);

  const fs::path out(flags.out_dir);
  write_file(out / "measure.json", mu.to_json_text());
  write_file(out / "table.json", table_to_json(table));
  write_file(out / "decay.csv", decay_profile_to_csv(profile));
  std::cout << "transform: dim=" << mu.dim() << " box=" << box
            << " fitted_s=" << profile.fitted_s << " cap=" << profile.cap << "\n";
  return 0;
}

int cmd_verify(const CommonFlags& flags) {
  const json cfg = load_config(flags);
  BatteryConfig battery;
  battery.seeds = static_cast<int>(get_or<int64_t>(cfg, "seeds", 20));
  battery.budget_override = flags.budget.value_or(get_or<double>(cfg, "budget", -1.0));
  battery.strict = flags.strict;
  battery.box_1d = get_or<int64_t>(cfg, "box_1d", 1280);
  battery.box_2d = get_or<int64_t>(cfg, "box_2d", 250);
  if (flags.box) {
    battery.box_1d = *flags.box;
    battery.box_2d = *flags.box;
  }
  const auto reports = run_default_battery(battery);
  const fs::path out(flags.out_dir);
  write_file(out / "reports.json", reports_to_json(reports));
  write_file(out / "reports.csv", reports_to_csv(reports));
  int violations = 0, skipped = 0;
  for (const auto& rep : reports) {
    if (rep.verdict == Verdict::kViolated) ++violations;
    if (rep.verdict == Verdict::kSkipped) ++skipped;
  }
  std::cout << "verify: " << reports.size() << " reports, " << violations << " violated, "
            << skipped << " skipped\n";
  return violations > 0 ? 1 : 0;
}

int cmd_parseval(const CommonFlags& flags) {
  const json cfg = load_config(flags);
  const double tol = get_or<double>(cfg, "tol", 1e-6);
  const auto reports = run_parseval_battery(tol);
  const fs::path out(flags.out_dir);
  write_file(out / "reports.json", reports_to_json(reports));
  write_file(out / "reports.csv", reports_to_csv(reports));
  std::cout << "parseval: " << reports.size() << " cases, tol=" << tol << "\n";
  return any_violation(reports) ? 1 : 0;
}

int cmd_borel_cantelli(const CommonFlags& flags) {
  const json cfg = load_config(flags);
  const double tau_prime = get_or<double>(cfg, "tau_prime", 2.0);
  const int64_t q_max = get_or<int64_t>(cfg, "q_max", 10000);
  const std::string mode_name = get_or<std::string>(cfg, "mode", "lattice");
  const int folds = get_or<int>(cfg, "folds", 1);

  FourierTable table;
  if (cfg.contains("synthetic")) {
    const json& syn = cfg.at("synthetic");
    const int64_t box = flags.box.value_or(get_or<int64_t>(syn, "box", 4096));
    table = synthetic_power_law(get_or<int>(syn, "d", 1), box, syn.at("alpha").get<double>());
  } else {
    const json mspec = cfg.contains("measure") ? cfg.at("measure") : json::object();
    BuiltMeasure mu = build_measure(mspec, flags);
    int64_t box = flags.box.value_or(get_or<int64_t>(cfg, "box", 0));
    if (box <= 0) box = mu.is_atomic ? 2048 : std::min<int64_t>(mu.grid.resolution / 2, 2048);
    table = mu.is_atomic ? transform(mu.atomic, box) : transform(mu.grid, box);
  }

  SeriesReport report;
  if (mode_name == "lattice") {
    report = borel_cantelli_scan(table, tau_prime, q_max, ScanMode::kLattice);
  } else if (mode_name == "linear-form") {
    const int64_t q_sup = get_or<int64_t>(cfg, "q_sup", 8);
    const int d = table.dim / folds;
    report = borel_cantelli_scan(table, tau_prime, q_max, ScanMode::kLinearForm,
                                 primitive_reps(d, q_sup), folds);
  } else {
    throw std::runtime_error("unknown scan mode: " + mode_name);
  }
  if (flags.strict && report.coverage_truncated)
    throw std::runtime_error("borel-cantelli: table box truncates the scheduled sums");

  const fs::path out(flags.out_dir);
  write_file(out / "series.json", series_to_json(report));
  write_file(out / "series.csv", series_to_csv(report));
  std::cout << "borel-cantelli: " << to_string(report.classified)
            << " tail_slope=" << report.tail_slope
            << (report.coverage_truncated ? " (coverage truncated)" : "") << "\n";
  return 0;
}

int cmd_badness(const CommonFlags& flags) {
  const json cfg = load_config(flags);
  const int64_t q_max = get_or<int64_t>(cfg, "q_max", 100000);
  std::vector<std::vector<double>> points;
  if (cfg.contains("points")) {
    points = cfg.at("points").get<std::vector<std::vector<double>>>();
  } else {
    points = {{0.6180339887498949}, {0.41421356237309515}, {1.0 / 3.0}};
  }
  std::ostringstream csv;
  csv << "x,Q_max,score\r\n";
  for (const auto& x : points) {
    const double score = badness(x, q_max);
    std::ostringstream xs;
    xs << "(";
    for (size_t k = 0; k < x.size(); ++k) xs << (k ? "," : "") << json(x[k]).dump();
    xs << ")";
    csv << "\"" << xs.str() << "\"," << q_max << "," << json(score).dump() << "\r\n";
  }
  const fs::path out(flags.out_dir);
  write_file(out / "badness.csv", csv.str());
  std::cout << "badness: " << points.size() << " points, Q_max=" << q_max << "\n";
  return 0;
}

int cmd_witness(const CommonFlags& flags) {
  const json cfg = load_config(flags);
  const double tau = get_or<double>(cfg, "tau", 1.0);
  const int d = get_or<int>(cfg, "d", 1);
  const int folds = get_or<int>(cfg, "folds", 2);
  const double slack = get_or<double>(cfg, "slack", 0.15);
  const double shell_base = get_or<double>(cfg, "shell_base", 1.5);

  json configs = json::array();
  if (cfg.contains("configs")) {
    configs = cfg.at("configs");
  } else {
    configs = json::array({
        {{"q_set", {{3}, {4}, {5}, {6}, {7}, {8}}}, {"resolution", 512}, {"tower_depth", 1}},
        {{"q_set", {{3}, {5}, {7}, {11}}}, {"resolution", 512}, {"tower_depth", 1}},
        {{"q_set", {{3}, {5}, {7}, {9}}}, {"resolution", 512}, {"tower_depth", 1}},
        {{"q_set", {{3}, {4}, {5}, {6}, {7}, {8}, {9}, {10}}},
         {"resolution", 512},
         {"tower_depth", 2}},
        {{"q_set", {{3}, {4}, {5}}}, {"resolution", 768}, {"tower_depth", 1}},
    });
  }

  std::vector<BoundReport> reports;
  int index = 0;
  for (const auto& c : configs) {
    ApproximantParams params;
    params.tau = tau;
    params.d = d;
    params.folds = folds;
    params.q_set = c.at("q_set").get<std::vector<std::vector<int64_t>>>();
    params.resolution = get_or<int64_t>(c, "resolution", 512);
    params.tower_depth = get_or<int>(c, "tower_depth", 1);
    const GridMeasure mu = approximant_measure(params);
    // Default frequency window: the truncation's resonant reach ~ q_max^2/2,
    // past which a finite slab union no longer mimics the lim sup set.
    int64_t q_max = 1;
    for (const auto& q : params.q_set)
      q_max = std::max(q_max, static_cast<int64_t>(sup_norm(q)));
    const int64_t reach =
        std::clamp<int64_t>(q_max * q_max / 2, 8, params.resolution / 2);
    const int64_t box = flags.box.value_or(get_or<int64_t>(c, "box", reach));
    BoundReport rep = non_salem_witness(tau, d, folds, mu, box, shell_base, slack);
    rep.params["config"] = std::to_string(index++);
    rep.note += "; evidence check: finite truncation cannot certify the exact value";
    reports.push_back(std::move(rep));
  }
  const fs::path out(flags.out_dir);
  write_file(out / "reports.json", reports_to_json(reports));
  write_file(out / "reports.csv", reports_to_csv(reports));
  int violations = 0;
  for (const auto& rep : reports)
    if (rep.verdict == Verdict::kViolated) ++violations;
  std::cout << "witness: " << reports.size() << " configurations, " << violations
            << " above ceiling+slack\n";
  return violations > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torus measures, Fourier decay, and lattice counting experiments"};
  app.require_subcommand(1);

  CommonFlags flags;
  for (auto* sub : {app.add_subcommand("transform", "Fourier table and decay profile"),
                    app.add_subcommand("verify", "counting-bound battery"),
                    app.add_subcommand("parseval", "plane-measure pairing identity battery"),
                    app.add_subcommand("borel-cantelli", "scheduled series scan"),
                    app.add_subcommand("badness", "badness functional scores"),
                    app.add_subcommand("witness", "approximant decay ceiling check")}) {
    sub->add_option("--config", flags.config_path, "JSON config file");
    sub->add_option("--out", flags.out_dir, "output directory");
    sub->add_option("--seed", flags.seed, "seed override");
    sub->add_option("--budget", flags.budget, "ratio budget override");
    sub->add_option("--box", flags.box, "frequency box override");
    sub->add_option("--grid", flags.grid, "grid resolution override");
    sub->add_flag("--strict", flags.strict, "promote coverage warnings to errors");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("transform")) return cmd_transform(flags);
    if (app.got_subcommand("verify")) return cmd_verify(flags);
    if (app.got_subcommand("parseval")) return cmd_parseval(flags);
    if (app.got_subcommand("borel-cantelli")) return cmd_borel_cantelli(flags);
    if (app.got_subcommand("badness")) return cmd_badness(flags);
    if (app.got_subcommand("witness")) return cmd_witness(flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
