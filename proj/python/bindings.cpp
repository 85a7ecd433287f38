#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vianalab/exponents.hpp"
#include "vianalab/hyperbolic_times.hpp"
#include "vianalab/map.hpp"
#include "vianalab/orbit.hpp"
#include "vianalab/thermo.hpp"
#include "vianalab/ulam.hpp"

namespace py = pybind11;
using namespace viana;

namespace {

OrbitScalars orbit_from(const MapParams& mp, double theta, double x, std::int64_t n) {
    return orbit(mp, {theta, x}, n);
}

OrbitScalars scalars_from(std::vector<double> u, std::vector<double> dist) {
    OrbitScalars rec;
    rec.log_abs_det.assign(dist.size(), 0.0);
    rec.log_inv_norm = std::move(u);
    rec.dist = std::move(dist);
    return rec;
}

}  // namespace

PYBIND11_MODULE(_vianalab, m) {
    m.doc() = "Skew-product dynamics laboratory: Lyapunov exponents, hyperbolic times, "
              "Ulam discretizations and finite-model equilibrium states";

    py::class_<PhasePoint>(m, "PhasePoint")
        .def(py::init<double, double>(), py::arg("theta"), py::arg("x"))
        .def_readwrite("theta", &PhasePoint::theta)
        .def_readwrite("x", &PhasePoint::x)
        .def("__repr__", [](const PhasePoint& p) {
            return "PhasePoint(theta=" + std::to_string(p.theta) +
                   ", x=" + std::to_string(p.x) + ")";
        });

    py::class_<MapParams>(m, "MapParams")
        .def_static("create", &MapParams::create, py::arg("d"), py::arg("a0"),
                    py::arg("alpha"), py::arg("beta"))
        .def_static("preset", &MapParams::preset, py::arg("alpha") = 0.01,
                    py::arg("d") = 16)
        .def_static("unchecked", &MapParams::unchecked)
        .def_static("misiurewicz_a0", &MapParams::misiurewicz_a0, py::arg("tol") = 1e-12)
        .def_static("default_beta", &MapParams::default_beta)
        .def_readonly("d", &MapParams::d)
        .def_readonly("a0", &MapParams::a0)
        .def_readonly("alpha", &MapParams::alpha)
        .def_readonly("beta", &MapParams::beta)
        .def("notes", &MapParams::notes);

    py::class_<Jacobian>(m, "Jacobian")
        .def_readonly("m00", &Jacobian::m00)
        .def_readonly("m01", &Jacobian::m01)
        .def_readonly("m10", &Jacobian::m10)
        .def_readonly("m11", &Jacobian::m11)
        .def("det", &Jacobian::det)
        .def("smin", &Jacobian::smin)
        .def("smax", &Jacobian::smax);

    m.def("step", &step, py::arg("params"), py::arg("p"));
    m.def("jacobian", &jacobian, py::arg("params"), py::arg("p"));
    m.def("dist_to_critical", py::overload_cast<const PhasePoint&>(&dist_to_critical));
    m.def("dist_to_critical",
          py::overload_cast<const PhasePoint&, double>(&dist_to_critical));

    py::class_<OrbitScalars>(m, "OrbitScalars")
        .def_readonly("log_inv_norm", &OrbitScalars::log_inv_norm)
        .def_readonly("log_abs_det", &OrbitScalars::log_abs_det)
        .def_readonly("dist", &OrbitScalars::dist)
        .def("size", &OrbitScalars::size);
    m.def("orbit", &orbit_from, py::arg("params"), py::arg("theta"), py::arg("x"),
          py::arg("n"));
    m.def("orbit_scalars", &scalars_from, py::arg("log_inv_norm"), py::arg("dist"),
          "Wrap raw series for hyperbolic-time detection");

    py::class_<ExponentEstimate>(m, "ExponentEstimate")
        .def_readonly("lambda_u", &ExponentEstimate::lambda_u)
        .def_readonly("lambda_c", &ExponentEstimate::lambda_c)
        .def_readonly("log_det_avg", &ExponentEstimate::log_det_avg)
        .def_readonly("n", &ExponentEstimate::n)
        .def_readonly("stderr_u", &ExponentEstimate::stderr_u)
        .def_readonly("stderr_c", &ExponentEstimate::stderr_c)
        .def_readonly("converged", &ExponentEstimate::converged);
    m.def(
        "lyapunov_qr",
        [](const MapParams& mp, double theta, double x, std::int64_t n) {
            return lyapunov_qr(mp, {theta, x}, n);
        },
        py::arg("params"), py::arg("theta"), py::arg("x"), py::arg("n"));
    m.def(
        "lyapunov_split",
        [](const MapParams& mp, double theta, double x, std::int64_t n) {
            return lyapunov_split(mp, {theta, x}, n);
        },
        py::arg("params"), py::arg("theta"), py::arg("x"), py::arg("n"));

    py::class_<ExponentSurvey>(m, "ExponentSurvey")
        .def_readonly("lambda_c", &ExponentSurvey::lambda_c)
        .def_readonly("lambda_u", &ExponentSurvey::lambda_u)
        .def_readonly("c0_empirical", &ExponentSurvey::c0_empirical)
        .def_readonly("frac_positive", &ExponentSurvey::frac_positive)
        .def_readonly("eps_default", &ExponentSurvey::eps_default);
    m.def("exponent_survey", &exponent_survey, py::arg("params"), py::arg("n_points"),
          py::arg("n_iter"), py::arg("rng_seed"), py::arg("threads") = 0);

    py::class_<ThermoConstants>(m, "ThermoConstants")
        .def_static("derive", &ThermoConstants::derive, py::arg("c0"), py::arg("eps"),
                    py::arg("d"))
        .def_readonly("c0", &ThermoConstants::c0)
        .def_readonly("eps", &ThermoConstants::eps)
        .def_readonly("zeta", &ThermoConstants::zeta)
        .def_readonly("kappa0", &ThermoConstants::kappa0)
        .def_property_readonly("sigma", [](const ThermoConstants& tc) {
            return tc.sigma ? py::cast(*tc.sigma) : py::none().cast<py::object>();
        });

    py::class_<HTParams>(m, "HTParams")
        .def_static("create", &HTParams::create, py::arg("sigma"), py::arg("delta"),
                    py::arg("b"), py::arg("ell") = 1.0)
        .def_readonly("sigma", &HTParams::sigma)
        .def_readonly("delta", &HTParams::delta)
        .def_readonly("b", &HTParams::b);
    py::class_<HTReport>(m, "HTReport")
        .def_readonly("times", &HTReport::times)
        .def_readonly("density", &HTReport::density)
        .def_readonly("horizon", &HTReport::horizon);
    m.def("detect", &detect, py::arg("orbit"), py::arg("params"));
    m.def("detect_bruteforce", &detect_bruteforce, py::arg("orbit"), py::arg("params"));

    py::class_<RecurrenceProfile>(m, "RecurrenceProfile")
        .def_property_readonly("delta",
                               [](const RecurrenceProfile& p) {
                                   return p.delta ? py::cast(*p.delta)
                                                  : py::none().cast<py::object>();
                               })
        .def_readonly("curve", &RecurrenceProfile::curve)
        .def_readonly("gamma", &RecurrenceProfile::gamma);
    m.def("slow_recurrence_profile", &slow_recurrence_profile, py::arg("dist"),
          py::arg("gamma"), py::arg("k_max") = 20);

    py::class_<Grid>(m, "Grid")
        .def_static("regular", &Grid::regular, py::arg("beta"), py::arg("n_theta"),
                    py::arg("n_x"), py::arg("band") = 0.05, py::arg("refine") = 4)
        .def_readonly("n_theta", &Grid::n_theta)
        .def_readonly("x_edges", &Grid::x_edges)
        .def("n_x", &Grid::n_x)
        .def("size", &Grid::size)
        .def("cell_of", &Grid::cell_of)
        .def("center", &Grid::center);

    py::class_<TransitionMatrix>(m, "TransitionMatrix")
        .def_readonly("n", &TransitionMatrix::n)
        .def_readonly("row_ptr", &TransitionMatrix::row_ptr)
        .def_readonly("col", &TransitionMatrix::col)
        .def_readonly("val", &TransitionMatrix::val)
        .def_readonly("samples_per_cell", &TransitionMatrix::samples_per_cell);
    m.def("build_ulam", &build_ulam, py::arg("params"), py::arg("grid"),
          py::arg("samples_per_cell"), py::arg("rng_seed"), py::arg("threads") = 0);

    py::class_<MeasureOnGrid>(m, "MeasureOnGrid")
        .def_readonly("w", &MeasureOnGrid::w)
        .def("total", &MeasureOnGrid::total);
    py::class_<StationaryResult>(m, "StationaryResult")
        .def_readonly("mu", &StationaryResult::mu)
        .def_readonly("residual", &StationaryResult::residual)
        .def_readonly("iterations", &StationaryResult::iterations)
        .def_readonly("converged", &StationaryResult::converged)
        .def_readonly("reducible", &StationaryResult::reducible);
    m.def(
        "stationary",
        [](const TransitionMatrix& P, double tol, std::int64_t max_iter, int threads) {
            return stationary(P, tol, max_iter, threads);
        },
        py::arg("P"), py::arg("tol") = 1e-10, py::arg("max_iter") = 20000,
        py::arg("threads") = 0);

    py::class_<MeasureExponents>(m, "MeasureExponents")
        .def_readonly("lambda_u", &MeasureExponents::lambda_u)
        .def_readonly("lambda_c", &MeasureExponents::lambda_c)
        .def_readonly("log_det_avg", &MeasureExponents::log_det_avg);
    m.def("measure_exponents", &measure_exponents, py::arg("params"), py::arg("grid"),
          py::arg("mu"), py::arg("samples_per_cell"), py::arg("rng_seed"),
          py::arg("threads") = 0);
    m.def("entropy_pesin", &entropy_pesin);
    m.def("k_membership", &k_membership, py::arg("exponents"), py::arg("constants"));

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def(py::init([](std::vector<double> phi) { return PotentialSpec{std::move(phi)}; }))
        .def_static("zero", &PotentialSpec::zero)
        .def_static("sin_theta", &PotentialSpec::sin_theta)
        .def_readonly("phi", &PotentialSpec::phi)
        .def("oscillation", &PotentialSpec::oscillation);
    m.def("nearly_constant_check", &nearly_constant_check);

    py::class_<MarkovModel>(m, "MarkovModel")
        .def_static("full_shift", &MarkovModel::full_shift, py::arg("n_symbols"),
                    py::arg("phi") = std::vector<double>{})
        .def_static("golden_mean", &MarkovModel::golden_mean)
        .def_static("from_transition", &MarkovModel::from_transition, py::arg("P"),
                    py::arg("cut"), py::arg("phi"))
        .def("largest_scc",
             [](const MarkovModel& m_) {
                 std::vector<std::int64_t> map;
                 MarkovModel sub = m_.largest_scc(&map);
                 return py::make_tuple(sub, map);
             })
        .def_readonly("n", &MarkovModel::n)
        .def_readonly("strongly_connected", &MarkovModel::strongly_connected);

    py::class_<PressureResult>(m, "PressureResult")
        .def_readonly("log_rho", &PressureResult::log_rho)
        .def_readonly("residual", &PressureResult::residual)
        .def_readonly("converged", &PressureResult::converged);
    m.def("pressure", &pressure, py::arg("model"), py::arg("tol") = 1e-12,
          py::arg("max_iter") = 200000);

    py::class_<GibbsResult>(m, "GibbsResult")
        .def_readonly("pressure", &GibbsResult::pressure)
        .def_readonly("stationary", &GibbsResult::stationary)
        .def_readonly("entropy", &GibbsResult::entropy)
        .def_readonly("phi_integral", &GibbsResult::phi_integral)
        .def_readonly("identity_residual", &GibbsResult::identity_residual);
    m.def("gibbs_measure", &gibbs_measure, py::arg("model"), py::arg("tol") = 1e-12,
          py::arg("max_iter") = 200000);

    py::class_<PeriodicOrbit>(m, "PeriodicOrbit")
        .def_readonly("period", &PeriodicOrbit::period)
        .def_readonly("xs", &PeriodicOrbit::xs)
        .def_readonly("lambda_c", &PeriodicOrbit::lambda_c)
        .def_readonly("lambda_u", &PeriodicOrbit::lambda_u)
        .def_readonly("min_dist", &PeriodicOrbit::min_dist);
    m.def("find_fiber_periodic_orbits", &find_fiber_periodic_orbits, py::arg("params"),
          py::arg("max_period"));
}
