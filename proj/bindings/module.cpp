#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "salemlab/bounds.hpp"
#include "salemlab/bump.hpp"
#include "salemlab/fourier.hpp"
#include "salemlab/lattice.hpp"
#include "salemlab/measure.hpp"

namespace py = pybind11;
using namespace salemlab;

PYBIND11_MODULE(_salemlab, m) {
  m.doc() = "torus measures, Fourier decay, and lattice counting bounds";

  py::register_exception<CoverageError>(m, "CoverageError", PyExc_ValueError);

  // --- measures ---
  py::class_<AtomicMeasure>(m, "AtomicMeasure")
      .def_readonly("dim", &AtomicMeasure::dim)
      .def_readonly("points", &AtomicMeasure::points)
      .def_readonly("weights", &AtomicMeasure::weights)
      .def_readwrite("meta", &AtomicMeasure::meta)
      .def("__len__", &AtomicMeasure::size);

  py::class_<GridMeasure>(m, "GridMeasure")
      .def_readonly("dim", &GridMeasure::dim)
      .def_readonly("resolution", &GridMeasure::resolution)
      .def_readonly("mass", &GridMeasure::mass)
      .def_readwrite("meta", &GridMeasure::meta)
      .def("cell_count", &GridMeasure::cell_count)
      .def("total_mass", &GridMeasure::total_mass);

  py::enum_<RandomProfile>(m, "RandomProfile")
      .value("SPARSE_ATOMS", RandomProfile::kSparseAtoms)
      .value("ROUGH_DENSITY", RandomProfile::kRoughDensity)
      .value("SMOOTH_DENSITY", RandomProfile::kSmoothDensity);

  m.def("make_atomic", &make_atomic, py::arg("points"), py::arg("weights"));
  m.def("point_mass", &point_mass, py::arg("point"));
  m.def("make_uniform_grid", &make_uniform_grid, py::arg("d"), py::arg("N"));
  m.def("localize", &localize, py::arg("mu"), py::arg("center"), py::arg("radius"));
  m.def("random_measure", &random_measure, py::arg("d"), py::arg("N"), py::arg("seed"),
        py::arg("profile"));
  m.def(
      "approximant_measure",
      [](double tau, int d, int folds, const std::vector<std::vector<int64_t>>& q_set,
         int64_t resolution, int tower_depth,
         const std::optional<std::function<double(std::vector<int64_t>)>>& delta_rule) {
        ApproximantParams params;
        params.tau = tau;
        params.d = d;
        params.folds = folds;
        params.q_set = q_set;
        params.resolution = resolution;
        params.tower_depth = tower_depth;
        if (delta_rule) {
          auto fn = *delta_rule;
          params.delta_rule = [fn](std::span<const int64_t> q) {
            return fn(std::vector<int64_t>(q.begin(), q.end()));
          };
        }
        return approximant_measure(params);
      },
      py::arg("tau"), py::arg("d"), py::arg("folds"), py::arg("q_set"), py::arg("resolution"),
      py::arg("tower_depth") = 1, py::arg("delta_rule") = std::nullopt);
  m.def("measure_to_json", py::overload_cast<const AtomicMeasure&>(&measure_to_json));
  m.def("measure_to_json", py::overload_cast<const GridMeasure&>(&measure_to_json));
  m.def("measure_from_json", [](const std::string& text) -> py::object {
    AtomicMeasure a;
    GridMeasure g;
    if (measure_from_json(text, a, g)) return py::cast(a);
    return py::cast(g);
  });

  // --- bump profiles ---
  py::enum_<BumpKind>(m, "BumpKind")
      .value("COMPACT_SUPPORT", BumpKind::kCompactSupport)
      .value("BAND_LIMITED", BumpKind::kBandLimited);

  py::class_<BumpProfile>(m, "BumpProfile")
      .def(py::init([](BumpKind kind, double width, int dim, double band_limit) {
             BumpProfile p{kind, width, dim, band_limit};
             validate(p);
             return p;
           }),
           py::arg("kind"), py::arg("width"), py::arg("dim"), py::arg("band_limit") = 2.0)
      .def_readonly("kind", &BumpProfile::kind)
      .def_readonly("width", &BumpProfile::width)
      .def_readonly("dim", &BumpProfile::dim)
      .def_readonly("band_limit", &BumpProfile::band_limit);

  m.def("bump_value", [](const BumpProfile& p, const std::vector<double>& y) {
    return bump_value(p, y);
  });
  m.def("bump_hat", [](const BumpProfile& p, const std::vector<double>& xi) {
    return bump_hat(p, xi);
  });
  m.def("bump_sup", &bump_sup);
  m.def("bump_min_on_ball", &bump_min_on_ball, py::arg("profile"), py::arg("radius"));
  m.def("band_limited_t_cutoff",
        [](const BumpProfile& p, double delta_star, const std::vector<int64_t>& q) {
          return band_limited_t_cutoff(p, delta_star, q);
        });

  // --- Fourier tables ---
  py::class_<FourierTable>(m, "FourierTable")
      .def_readonly("dim", &FourierTable::dim)
      .def_readonly("box_radius", &FourierTable::box_radius)
      .def_readwrite("meta", &FourierTable::meta)
      .def("__len__", [](const FourierTable& t) { return t.coeffs.size(); })
      .def("at", [](const FourierTable& t, const std::vector<int64_t>& xi) { return t.at(xi); });

  m.def("transform", py::overload_cast<const AtomicMeasure&, int64_t>(&transform), py::arg("mu"),
        py::arg("box_radius"));
  m.def("transform", py::overload_cast<const GridMeasure&, int64_t>(&transform), py::arg("mu"),
        py::arg("box_radius"));
  m.def("transform_sublattice",
        py::overload_cast<const AtomicMeasure&, const std::vector<int64_t>&, int, int64_t>(
            &transform_sublattice),
        py::arg("mu"), py::arg("q"), py::arg("folds"), py::arg("t_max"));
  m.def("transform_sublattice",
        py::overload_cast<const GridMeasure&, const std::vector<int64_t>&, int, int64_t>(
            &transform_sublattice),
        py::arg("mu"), py::arg("q"), py::arg("folds"), py::arg("t_max"));
  m.def("synthetic_power_law", &synthetic_power_law, py::arg("dim"), py::arg("box_radius"),
        py::arg("alpha"));
  m.def("table_to_json", &table_to_json);
  m.def("table_from_json", &table_from_json);
  m.def("validate_table", [](const FourierTable& t) { validate(t); });

  py::enum_<Norm>(m, "Norm").value("EUCLID", Norm::kEuclid).value("SUP", Norm::kSup);
  m.def("lattice_multiple_freqs", &lattice_multiple_freqs, py::arg("dim"), py::arg("Q"),
        py::arg("radius"));
  m.def("ray_freqs", &ray_freqs, py::arg("q"), py::arg("folds"), py::arg("t_max"));
  m.def("box_freqs", &box_freqs, py::arg("dim"), py::arg("radius"), py::arg("norm"),
        py::arg("exclude_zero"));
  m.def("restricted_sum", &restricted_sum, py::arg("table"), py::arg("freqs"),
        py::arg("magnitude_only"));

  py::class_<DecayProfile>(m, "DecayProfile")
      .def_readonly("shells", &DecayProfile::shells)
      .def_readonly("fitted_s", &DecayProfile::fitted_s)
      .def_readonly("cap", &DecayProfile::cap)
      .def_readonly("zero_dominated", &DecayProfile::zero_dominated);
  m.def("decay_profile", &decay_profile, py::arg("table"), py::arg("shell_base") = 1.5);
  m.def("decay_profile_to_csv", &decay_profile_to_csv);

  // --- lattice geometry ---
  py::class_<LatticeNeighborhood>(m, "LatticeNeighborhood")
      .def(py::init([](int dim, int64_t Q, double delta) {
             LatticeNeighborhood nb{dim, Q, delta};
             validate(nb);
             return nb;
           }),
           py::arg("dim"), py::arg("Q"), py::arg("delta"))
      .def_readonly("dim", &LatticeNeighborhood::dim)
      .def_readonly("Q", &LatticeNeighborhood::Q)
      .def_readonly("delta", &LatticeNeighborhood::delta);

  py::class_<LinearFormSpec>(m, "LinearFormSpec")
      .def(py::init([](int d, const std::vector<int64_t>& q, double delta, int folds) {
             LinearFormSpec spec{d, q, delta, folds};
             validate(spec);
             return spec;
           }),
           py::arg("d"), py::arg("q"), py::arg("delta"), py::arg("folds") = 1)
      .def_readonly("d", &LinearFormSpec::d)
      .def_readonly("q", &LinearFormSpec::q)
      .def_readonly("delta", &LinearFormSpec::delta)
      .def_readonly("folds", &LinearFormSpec::folds)
      .def("delta_star", &LinearFormSpec::delta_star);

  py::class_<PlaneUnionMeasure>(m, "PlaneUnionMeasure")
      .def(py::init([](int d, const std::vector<int64_t>& q) {
             PlaneUnionMeasure pm{d, q};
             validate(pm);
             return pm;
           }),
           py::arg("d"), py::arg("q"))
      .def_readonly("d", &PlaneUnionMeasure::d)
      .def_readonly("q", &PlaneUnionMeasure::q);

  py::class_<MeasureEval>(m, "MeasureEval")
      .def_readonly("value", &MeasureEval::value)
      .def_readonly("boundary_error", &MeasureEval::boundary_error);

  py::class_<AdConstants>(m, "AdConstants")
      .def_readonly("lower", &AdConstants::lower)
      .def_readonly("upper", &AdConstants::upper);

  m.def("in_lattice_neighborhood",
        [](const std::vector<double>& x, const LatticeNeighborhood& nb) {
          return in_lattice_neighborhood(x, nb);
        });
  m.def("in_linear_form", [](const std::vector<double>& x, const LinearFormSpec& spec) {
    return in_linear_form(x, spec);
  });
  m.def("measure_of_lattice_neighborhood",
        py::overload_cast<const AtomicMeasure&, const LatticeNeighborhood&>(
            &measure_of_lattice_neighborhood));
  m.def("measure_of_lattice_neighborhood",
        py::overload_cast<const GridMeasure&, const LatticeNeighborhood&>(
            &measure_of_lattice_neighborhood));
  m.def("measure_of_linear_form",
        py::overload_cast<const AtomicMeasure&, const LinearFormSpec&>(&measure_of_linear_form));
  m.def("measure_of_linear_form",
        py::overload_cast<const GridMeasure&, const LinearFormSpec&>(&measure_of_linear_form));
  m.def("plane_fourier_coefficient", &plane_fourier_coefficient, py::arg("pm"), py::arg("k"));
  m.def("plane_fourier_quadrature", &plane_fourier_quadrature, py::arg("pm"), py::arg("k"),
        py::arg("mesh"));
  m.def("plane_ball_measure", [](const PlaneUnionMeasure& pm, const std::vector<double>& x,
                                 double eps) { return plane_ball_measure(pm, x, eps); });
  m.def("measure_ad_constants", &measure_ad_constants, py::arg("pm"), py::arg("eps_lo"),
        py::arg("eps_hi"), py::arg("point_samples") = 32, py::arg("eps_samples") = 12);
  m.def("mollified_plane_density",
        [](const PlaneUnionMeasure& pm, const BumpProfile& profile,
           const std::vector<double>& x) { return mollified_plane_density(pm, profile, x); });
  m.def("plane_table", &plane_table, py::arg("pm"), py::arg("box_radius"));

  // --- counting bounds and scans ---
  py::enum_<Verdict>(m, "Verdict")
      .value("CONSISTENT", Verdict::kConsistent)
      .value("VIOLATED", Verdict::kViolated)
      .value("SKIPPED", Verdict::kSkipped);

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("name", &BoundReport::name)
      .def_readonly("lhs", &BoundReport::lhs)
      .def_readonly("rhs_main", &BoundReport::rhs_main)
      .def_readonly("tail", &BoundReport::tail)
      .def_readonly("ratio", &BoundReport::ratio)
      .def_readonly("params", &BoundReport::params)
      .def_readonly("verdict", &BoundReport::verdict)
      .def_readonly("note", &BoundReport::note);

  py::enum_<SeriesClass>(m, "SeriesClass")
      .value("CONVERGING", SeriesClass::kConverging)
      .value("DIVERGING", SeriesClass::kDiverging)
      .value("INCONCLUSIVE", SeriesClass::kInconclusive);

  py::class_<SeriesReport>(m, "SeriesReport")
      .def_readonly("exponent_rule", &SeriesReport::exponent_rule)
      .def_readonly("partial_sums", &SeriesReport::partial_sums)
      .def_readonly("classified", &SeriesReport::classified)
      .def_readonly("tail_slope", &SeriesReport::tail_slope)
      .def_readonly("coverage_truncated", &SeriesReport::coverage_truncated);

  m.def("lattice_bound_upper",
        py::overload_cast<const AtomicMeasure&, const FourierTable&, double, int64_t, double>(
            &lattice_bound_upper),
        py::arg("mu"), py::arg("table"), py::arg("delta"), py::arg("Q"), py::arg("budget"));
  m.def("lattice_bound_upper",
        py::overload_cast<const GridMeasure&, const FourierTable&, double, int64_t, double>(
            &lattice_bound_upper),
        py::arg("mu"), py::arg("table"), py::arg("delta"), py::arg("Q"), py::arg("budget"));
  m.def("lattice_bound_lower",
        py::overload_cast<const AtomicMeasure&, const FourierTable&, double, int64_t, double,
                          int, double>(&lattice_bound_lower),
        py::arg("mu"), py::arg("table"), py::arg("delta"), py::arg("Q"), py::arg("K"),
        py::arg("N"), py::arg("c_lower"));
  m.def("lattice_bound_lower",
        py::overload_cast<const GridMeasure&, const FourierTable&, double, int64_t, double, int,
                          double>(&lattice_bound_lower),
        py::arg("mu"), py::arg("table"), py::arg("delta"), py::arg("Q"), py::arg("K"),
        py::arg("N"), py::arg("c_lower"));
  m.def("linear_form_bound_upper",
        py::overload_cast<const AtomicMeasure&, const FourierTable&, const LinearFormSpec&,
                          double>(&linear_form_bound_upper),
        py::arg("mu"), py::arg("table"), py::arg("spec"), py::arg("budget"));
  m.def("linear_form_bound_upper",
        py::overload_cast<const GridMeasure&, const FourierTable&, const LinearFormSpec&,
                          double>(&linear_form_bound_upper),
        py::arg("mu"), py::arg("table"), py::arg("spec"), py::arg("budget"));
  m.def("linear_form_bound_lower",
        py::overload_cast<const AtomicMeasure&, const FourierTable&, const LinearFormSpec&,
                          double, int, double>(&linear_form_bound_lower),
        py::arg("mu"), py::arg("table"), py::arg("spec"), py::arg("K"), py::arg("N"),
        py::arg("c_lower"));
  m.def("linear_form_bound_lower",
        py::overload_cast<const GridMeasure&, const FourierTable&, const LinearFormSpec&, double,
                          int, double>(&linear_form_bound_lower),
        py::arg("mu"), py::arg("table"), py::arg("spec"), py::arg("K"), py::arg("N"),
        py::arg("c_lower"));
  m.def("verify_parseval",
        py::overload_cast<const AtomicMeasure&, const LinearFormSpec&, const BumpProfile&,
                          int64_t, double>(&verify_parseval),
        py::arg("mu"), py::arg("spec"), py::arg("profile"), py::arg("trunc"), py::arg("tol"));
  m.def("verify_parseval",
        py::overload_cast<const GridMeasure&, const LinearFormSpec&, const BumpProfile&, int64_t,
                          double>(&verify_parseval),
        py::arg("mu"), py::arg("spec"), py::arg("profile"), py::arg("trunc"), py::arg("tol"));
  m.def("tail_envelope", &tail_envelope, py::arg("profile"), py::arg("spec"), py::arg("K"),
        py::arg("N"));

  py::enum_<ScanMode>(m, "ScanMode")
      .value("LATTICE", ScanMode::kLattice)
      .value("LINEAR_FORM", ScanMode::kLinearForm);
  m.def("borel_cantelli_scan", &borel_cantelli_scan, py::arg("table"), py::arg("tau_prime"),
        py::arg("Q_max"), py::arg("mode"),
        py::arg("q_list") = std::vector<std::vector<int64_t>>{}, py::arg("folds") = 1);
  m.def("primitive_reps", &primitive_reps, py::arg("d"), py::arg("sup_max"));

  py::class_<TauEpsChoice>(m, "TauEpsChoice")
      .def_readonly("value", &TauEpsChoice::value)
      .def_readonly("feasible_lo", &TauEpsChoice::feasible_lo)
      .def_readonly("feasible_hi", &TauEpsChoice::feasible_hi)
      .def_readonly("exponent", &TauEpsChoice::exponent);
  m.def("choose_tau_eps", &choose_tau_eps, py::arg("tau"), py::arg("eps"), py::arg("n"));
  m.def("choose_tau_prime", &choose_tau_prime, py::arg("tau"), py::arg("alpha"), py::arg("d"),
        py::arg("n"));

  py::class_<TailSchedule>(m, "TailSchedule")
      .def_readonly("K", &TailSchedule::K)
      .def_readonly("N", &TailSchedule::N);
  m.def("lemma_tail_schedule", &lemma_tail_schedule, py::arg("Q"), py::arg("rho_prime"),
        py::arg("target_exp"));

  m.def(
      "badness", [](const std::vector<double>& x, int64_t q_max) { return badness(x, q_max); },
      py::arg("x"), py::arg("Q_max"));
  m.def(
      "badness_limit",
      [](const std::vector<double>& x, int64_t q_max) { return badness_limit(x, q_max); },
      py::arg("x"), py::arg("Q_max"));
  m.def("non_salem_witness", &non_salem_witness, py::arg("tau"), py::arg("d"), py::arg("folds"),
        py::arg("mu"), py::arg("box_radius"), py::arg("shell_base") = 1.5,
        py::arg("slack") = 0.15);

  py::class_<BatteryConfig>(m, "BatteryConfig")
      .def(py::init<>())
      .def_readwrite("seeds", &BatteryConfig::seeds)
      .def_readwrite("budget_override", &BatteryConfig::budget_override)
      .def_readwrite("strict", &BatteryConfig::strict)
      .def_readwrite("box_1d", &BatteryConfig::box_1d)
      .def_readwrite("box_2d", &BatteryConfig::box_2d);
  m.def("run_default_battery", &run_default_battery, py::arg("config") = BatteryConfig{});
  m.def("run_parseval_battery", &run_parseval_battery, py::arg("tol") = 1e-6);
  m.def("reports_to_json", &reports_to_json);
  m.def("reports_to_csv", &reports_to_csv);
  m.def("series_to_json", &series_to_json);
  m.def("series_to_csv", &series_to_csv);
  m.def("any_violation", &any_violation);
}
