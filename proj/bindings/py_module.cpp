#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cqtraj/action.hpp"
#include "cqtraj/errors.hpp"
#include "cqtraj/observables.hpp"
#include "cqtraj/scenario.hpp"
#include "cqtraj/version.hpp"

namespace py = pybind11;
using namespace cqtraj;

PYBIND11_MODULE(_core, m) {
    m.doc() = "complex quantum trajectories: wavefunctions, velocity fields, orbits, action";
    m.attr("__version__") = kVersion;

    py::register_exception<NodeSingularityError>(m, "NodeSingularity", PyExc_RuntimeError);
    py::register_exception<NotStationaryError>(m, "NotStationary", PyExc_RuntimeError);
    py::register_exception<NonNormalizableError>(m, "NonNormalizable", PyExc_RuntimeError);
    py::register_exception<UnsupportedModelError>(m, "UnsupportedModel", PyExc_RuntimeError);
    py::register_exception<NotClosedError>(m, "NotClosed", PyExc_RuntimeError);
    py::register_exception<QuadratureDivergedError>(m, "QuadratureDiverged", PyExc_RuntimeError);
    py::register_exception<PhaseAmbiguityError>(m, "PhaseAmbiguity", PyExc_RuntimeError);

    py::class_<Units>(m, "Units")
        .def(py::init<>())
        .def(py::init<double, double>(), py::arg("hbar"), py::arg("mass"))
        .def_readwrite("hbar", &Units::hbar)
        .def_readwrite("mass", &Units::mass);

    py::class_<HarmonicOscillator>(m, "HarmonicOscillator")
        .def(py::init<int, double>(), py::arg("n") = 0, py::arg("alpha") = 1.0)
        .def_readwrite("n", &HarmonicOscillator::n)
        .def_readwrite("alpha", &HarmonicOscillator::alpha);

    py::class_<PlaneWave>(m, "PlaneWave")
        .def(py::init<double, double>(), py::arg("k") = 1.0, py::arg("amplitude") = 1.0)
        .def_readwrite("k", &PlaneWave::k)
        .def_readwrite("amplitude", &PlaneWave::amplitude);

    py::class_<PotentialStep>(m, "PotentialStep")
        .def(py::init<double, double, double>(), py::arg("energy"), py::arg("v0"),
             py::arg("reflection"))
        .def_readwrite("energy", &PotentialStep::energy)
        .def_readwrite("v0", &PotentialStep::v0)
        .def_readwrite("reflection", &PotentialStep::reflection)
        .def("wavenumber_in", &PotentialStep::wavenumber_in)
        .def("wavenumber_out", &PotentialStep::wavenumber_out)
        .def("transmission", &PotentialStep::transmission);

    m.def("make_step", py::overload_cast<double, double>(&make_step), py::arg("energy"),
          py::arg("v0"), "step with the amplitude-matched reflection (k - q)/(k + q)");
    m.def("make_step", py::overload_cast<double, double, double>(&make_step), py::arg("energy"),
          py::arg("v0"), py::arg("reflection"));

    py::class_<GaussianPacket>(m, "GaussianPacket")
        .def(py::init<double, double>(), py::arg("sigma") = 1.0, py::arg("k_bar") = 1.0)
        .def_readwrite("sigma", &GaussianPacket::sigma)
        .def_readwrite("k_bar", &GaussianPacket::k_bar);

    m.def("validate", &validate);
    m.def("is_stationary", &is_stationary);
    m.def("is_normalizable", &is_normalizable);
    m.def("characteristic_frequency", &characteristic_frequency);
    m.def("length_scale", &length_scale);
    m.def("model_name", &model_name);
    m.def("oscillator_frequency", &oscillator_frequency);
    m.def("oscillator_energy", &oscillator_energy);

    py::class_<WaveValue>(m, "WaveValue")
        .def_readonly("psi", &WaveValue::psi)
        .def_readonly("dpsi_dx", &WaveValue::dpsi_dx)
        .def_readonly("d2psi_dx2", &WaveValue::d2psi_dx2)
        .def_readonly("dpsi_dt", &WaveValue::dpsi_dt);

    m.def("hermite", &hermite, py::arg("n"), py::arg("z"));
    m.def("hermite_zeros", &hermite_zeros, py::arg("n"));
    m.def("evaluate", &evaluate, py::arg("model"), py::arg("units"), py::arg("x"), py::arg("t"));
    m.def("potential", &potential, py::arg("model"), py::arg("units"), py::arg("x"));
    m.def("schrodinger_residual", &schrodinger_residual, py::arg("model"), py::arg("units"),
          py::arg("x"), py::arg("t"), py::arg("floor") = 1e-300);
    m.def("normalization_constant", &normalization_constant, py::arg("model"), py::arg("units"));
    m.def("reference_amplitude", &reference_amplitude, py::arg("model"), py::arg("units"));

    py::class_<VelocitySample>(m, "VelocitySample")
        .def_readonly("xdot", &VelocitySample::xdot)
        .def_readonly("xdot_r", &VelocitySample::xdot_r);

    py::class_<EnergySample>(m, "EnergySample")
        .def_readonly("energy", &EnergySample::energy)
        .def_readonly("quantum_term", &EnergySample::quantum_term);

    m.def("complex_velocity", &complex_velocity, py::arg("model"), py::arg("units"), py::arg("x"),
          py::arg("t"), py::arg("psi_floor") = 1e-12);
    m.def("physical_velocity_field", &physical_velocity_field, py::arg("model"), py::arg("units"),
          py::arg("x_r"), py::arg("x_i"), py::arg("t"), py::arg("psi_floor") = 1e-12);
    m.def("dbb_velocity", &dbb_velocity, py::arg("model"), py::arg("units"), py::arg("x_r"),
          py::arg("t"), py::arg("psi_floor") = 1e-12);
    m.def("energy_field", &energy_field, py::arg("model"), py::arg("units"), py::arg("x"),
          py::arg("t"), py::arg("psi_floor") = 1e-12);
    m.def("hj_function", &hj_function, py::arg("model"), py::arg("units"), py::arg("x"),
          py::arg("t"), py::arg("psi_floor") = 1e-12);
    m.def("near_node", &near_node, py::arg("model"), py::arg("units"), py::arg("x"), py::arg("t"),
          py::arg("psi_floor") = 1e-12);

    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init<>())
        .def_readwrite("rel_tol", &IntegratorConfig::rel_tol)
        .def_readwrite("abs_tol", &IntegratorConfig::abs_tol)
        .def_readwrite("max_step", &IntegratorConfig::max_step)
        .def_readwrite("fixed_step", &IntegratorConfig::fixed_step)
        .def_readwrite("psi_floor", &IntegratorConfig::psi_floor)
        .def_readwrite("node_floor", &IntegratorConfig::node_floor)
        .def_readwrite("max_steps", &IntegratorConfig::max_steps)
        .def_readwrite("close_eps", &IntegratorConfig::close_eps)
        .def_readwrite("stop_at_step_boundary", &IntegratorConfig::stop_at_step_boundary);

    py::enum_<Termination>(m, "Termination")
        .value("TimeReached", Termination::TimeReached)
        .value("ClosedOrbit", Termination::ClosedOrbit)
        .value("Singularity", Termination::Singularity)
        .value("StepBoundaryCrossed", Termination::StepBoundaryCrossed)
        .value("MaxSteps", Termination::MaxSteps);

    py::class_<TrajectoryPoint>(m, "TrajectoryPoint")
        .def_readonly("t", &TrajectoryPoint::t)
        .def_readonly("x", &TrajectoryPoint::x)
        .def_readonly("xdot", &TrajectoryPoint::xdot);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("points", &Trajectory::points)
        .def_readonly("termination", &Trajectory::termination)
        .def_readonly("crossed_step_boundary", &Trajectory::crossed_step_boundary)
        .def("sample", &Trajectory::sample, py::arg("t"));

    m.def("integrate", &integrate, py::arg("model"), py::arg("units"), py::arg("x0"),
          py::arg("t0"), py::arg("t1"), py::arg("config") = IntegratorConfig{});
    m.def("closed_form_position", &closed_form_position, py::arg("model"), py::arg("units"),
          py::arg("x0"), py::arg("t"));

    py::class_<PeriodResult>(m, "PeriodResult")
        .def_readonly("period", &PeriodResult::period)
        .def_readonly("orbit", &PeriodResult::orbit);

    m.def("detect_period", &detect_period, py::arg("model"), py::arg("units"), py::arg("x0"),
          py::arg("config") = IntegratorConfig{}, py::arg("t_max") = 0.0);

    py::enum_<InvariantKind>(m, "InvariantKind")
        .value("RadiusN0", InvariantKind::RadiusN0)
        .value("NestValueN1", InvariantKind::NestValueN1)
        .value("NestValueN2", InvariantKind::NestValueN2)
        .value("StepContourC", InvariantKind::StepContourC);

    py::class_<InvariantProbe>(m, "InvariantProbe")
        .def_readonly("kind", &InvariantProbe::kind)
        .def_readonly("value", &InvariantProbe::value);

    m.def("invariant_value", &invariant_value, py::arg("model"), py::arg("units"), py::arg("x"));
    m.def("step_contour_value", &step_contour_value, py::arg("model"), py::arg("units"),
          py::arg("x"));
    m.def("step_contour_height", &step_contour_height, py::arg("model"), py::arg("units"),
          py::arg("c"), py::arg("upper"));
    m.def("step_stagnation_point", &step_stagnation_point, py::arg("model"), py::arg("units"));

    py::class_<OrbitAnalysis>(m, "OrbitAnalysis")
        .def_readonly("period", &OrbitAnalysis::period)
        .def_readonly("action", &OrbitAnalysis::action)
        .def_readonly("action_imag_residual", &OrbitAnalysis::action_imag_residual)
        .def_readonly("winding", &OrbitAnalysis::winding)
        .def_readonly("enclosed_zero_count", &OrbitAnalysis::enclosed_zero_count)
        .def_readonly("is_larger_nest", &OrbitAnalysis::is_larger_nest);

    m.def("action_of_orbit", &action_of_orbit, py::arg("model"), py::arg("units"),
          py::arg("orbit"), py::arg("tol") = 1e-8);
    m.def("winding_number", &winding_number, py::arg("model"), py::arg("units"), py::arg("orbit"));
    m.def("dj_de_ratio", &dj_de_ratio, py::arg("units"), py::arg("alpha"), py::arg("n_low"),
          py::arg("n_high"), py::arg("low"), py::arg("high"));

    py::enum_<Observable>(m, "Observable")
        .value("Norm", Observable::Norm)
        .value("X", Observable::X)
        .value("P", Observable::P)
        .value("E", Observable::E);

    py::class_<ExpectationReport>(m, "ExpectationReport")
        .def_readonly("norm", &ExpectationReport::norm)
        .def_readonly("mean_x", &ExpectationReport::mean_x)
        .def_readonly("mean_p", &ExpectationReport::mean_p)
        .def_readonly("mean_E", &ExpectationReport::mean_E)
        .def_readonly("truncation_L", &ExpectationReport::truncation_L)
        .def_readonly("quad_tol", &ExpectationReport::quad_tol)
        .def_readonly("max_imag_residual", &ExpectationReport::max_imag_residual);

    m.def("expectation_report", &expectation_report, py::arg("model"), py::arg("units"),
          py::arg("t"), py::arg("quad_tol") = 1e-10, py::arg("L_override") = 0.0);
    m.def("expectation", &expectation, py::arg("model"), py::arg("units"), py::arg("t"),
          py::arg("which"), py::arg("quad_tol") = 1e-10, py::arg("L_override") = 0.0);

    m.def("emit_figure_dataset", &emit_figure_dataset, py::arg("which"), py::arg("out_dir"));
}
