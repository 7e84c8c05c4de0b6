#include <array>
#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ccd/drive.hpp"
#include "ccd/error.hpp"
#include "ccd/fit.hpp"
#include "ccd/io/cli.hpp"
#include "ccd/io/config.hpp"
#include "ccd/propagator.hpp"
#include "ccd/pulse.hpp"
#include "ccd/rb.hpp"
#include "ccd/sequences.hpp"
#include "ccd/spectrum.hpp"
#include "ccd/sweep.hpp"
#include "ccd/trajectory.hpp"

namespace py = pybind11;
using namespace ccd;

namespace {

RunOptions options(unsigned threads) {
  RunOptions o;
  o.threads = threads;
  return o;
}

py::dict grid_dict(const SweepGrid& g) {
  py::dict d;
  d["x_name"] = g.x.name;
  d["x"] = g.x.values;
  d["y_name"] = g.y.name;
  d["y"] = g.y.values;
  d["values"] = g.values;
  d["readout"] = std::string(to_string(g.meta.readout));
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Concatenated continuous driving of a single qubit";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CompileError>(m, "CompileError", PyExc_ValueError);
  py::register_exception<IntegratorError>(m, "IntegratorError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::enum_<Scheme>(m, "Scheme")
      .value("Bare", Scheme::Bare)
      .value("AMCCD", Scheme::AMCCD)
      .value("PMCCD", Scheme::PMCCD)
      .value("CMCCD", Scheme::CMCCD);
  py::enum_<Frame>(m, "Frame").value("Lab", Frame::Lab).value("First", Frame::First).value("Second", Frame::Second);
  py::enum_<Readout>(m, "Readout")
      .value("Auto", Readout::Auto)
      .value("Raw", Readout::Raw)
      .value("Matched", Readout::Matched);
  py::enum_<ErrorAxis>(m, "ErrorAxis").value("Detuning", ErrorAxis::Detuning).value("Rabi", ErrorAxis::Rabi);
  py::enum_<SequenceKind>(m, "SequenceKind")
      .value("CcdRabi", SequenceKind::CcdRabi)
      .value("CcdRamsey", SequenceKind::CcdRamsey)
      .value("TwoAxis", SequenceKind::TwoAxis);
  py::enum_<RBMode>(m, "RBMode").value("PulseLevel", RBMode::PulseLevel).value("IdealMatrices", RBMode::IdealMatrices);

  py::class_<DriveConfig>(m, "DriveConfig")
      .def(py::init<>())
      .def_readwrite("omega_L", &DriveConfig::omega_L)
      .def_readwrite("omega_mw", &DriveConfig::omega_mw)
      .def_readwrite("rabi", &DriveConfig::rabi)
      .def_readwrite("rabi_error", &DriveConfig::rabi_error)
      .def_readwrite("mod_strength", &DriveConfig::mod_strength)
      .def_readwrite("mod_phase", &DriveConfig::mod_phase)
      .def_readwrite("mw_phase", &DriveConfig::mw_phase)
      .def_readwrite("alpha_A", &DriveConfig::alpha_A)
      .def_readwrite("alpha_P", &DriveConfig::alpha_P)
      .def_property_readonly("detuning", &DriveConfig::detuning)
      .def("with_detuning", &DriveConfig::with_detuning)
      .def("with_scheme", &DriveConfig::with_scheme)
      .def("validate", &DriveConfig::validate)
      .def("__eq__", [](const DriveConfig& a, const DriveConfig& b) { return a == b; })
      .def("__repr__", [](const DriveConfig& c) {
        std::ostringstream s;
        s << "DriveConfig(rabi=" << c.rabi << ", mod_strength=" << c.mod_strength << ", detuning=" << c.detuning()
          << ", rabi_error=" << c.rabi_error << ", alpha_A=" << c.alpha_A << ", alpha_P=" << c.alpha_P << ")";
        return s.str();
      });

  m.def("default_config", &default_config, py::arg("scheme"));
  m.def("parse_scheme", [](const std::string& s) { return parse_scheme(s); });
  m.def("counter_rotating_coefficient", &counter_rotating_coefficient, py::arg("cfg"));
  m.def("co_rotating_coefficient", &co_rotating_coefficient, py::arg("cfg"));
  m.def("lab_drive_coefficient", &lab_drive_coefficient, py::arg("cfg"), py::arg("t"));
  m.def(
      "hamiltonian",
      [](const DriveConfig& cfg, Frame frame, double t) -> Operator {
        return make_hamiltonian(cfg, frame).field(t).matrix();
      },
      py::arg("cfg"), py::arg("frame"), py::arg("t"), "2x2 Hamiltonian matrix in rad/s");
  m.def(
      "first_frame_unitary", [](const DriveConfig& c, double t) { return first_frame_unitary(c, t).matrix(); },
      py::arg("cfg"), py::arg("t"));
  m.def(
      "second_frame_unitary", [](const DriveConfig& c, double t) { return second_frame_unitary(c, t).matrix(); },
      py::arg("cfg"), py::arg("t"));
  m.def(
      "iq_baseband",
      [](const DriveConfig& c, double t) {
        const IQSample s = iq_baseband(c, t);
        return std::make_pair(s.i, s.q);
      },
      py::arg("cfg"), py::arg("t"), "(I, Q) baseband envelope at t");

  m.def(
      "evolve",
      [](const DriveConfig& cfg, Frame frame, double t0, double t1, Eigen::Vector2cd psi0) {
        const IntegratorSpec spec = frame == Frame::Lab ? IntegratorSpec::lab_default() : IntegratorSpec::rotating_default();
        py::gil_scoped_release release;
        return evolve(make_hamiltonian(cfg, frame), QubitState(psi0), t0, t1, spec).vector();
      },
      py::arg("cfg"), py::arg("frame"), py::arg("t0"), py::arg("t1"),
      py::arg("psi0") = Eigen::Vector2cd(1.0, 0.0), "state amplitudes after propagating from t0 to t1");
  m.def(
      "propagator",
      [](const DriveConfig& cfg, Frame frame, double t0, double t1) {
        const IntegratorSpec spec = frame == Frame::Lab ? IntegratorSpec::lab_default() : IntegratorSpec::rotating_default();
        py::gil_scoped_release release;
        return propagator_unitary(make_hamiltonian(cfg, frame), t0, t1, spec).matrix();
      },
      py::arg("cfg"), py::arg("frame"), py::arg("t0"), py::arg("t1"));

  m.def(
      "chevron_sweep",
      [](Scheme s, const DriveConfig& c, const std::vector<double>& det, const std::vector<double>& dur, Readout r,
         unsigned threads) {
        SweepGrid g;
        {
          py::gil_scoped_release release;
          g = chevron_sweep(s, c, det, dur, r, options(threads));
        }
        return grid_dict(g);
      },
      py::arg("scheme"), py::arg("cfg"), py::arg("detunings"), py::arg("durations"), py::arg("readout") = Readout::Auto,
      py::arg("threads") = 0u);
  m.def(
      "rabi_error_sweep",
      [](Scheme s, const DriveConfig& c, const std::vector<double>& err, const std::vector<double>& dur, Readout r,
         unsigned threads) {
        SweepGrid g;
        {
          py::gil_scoped_release release;
          g = rabi_error_sweep(s, c, err, dur, r, options(threads));
        }
        return grid_dict(g);
      },
      py::arg("scheme"), py::arg("cfg"), py::arg("rabi_errors"), py::arg("durations"),
      py::arg("readout") = Readout::Auto, py::arg("threads") = 0u);
  m.def(
      "rabi_trace",
      [](Scheme s, const DriveConfig& c, const std::vector<double>& dur, Readout r) {
        py::gil_scoped_release release;
        return rabi_trace(s, c, dur, r);
      },
      py::arg("scheme"), py::arg("cfg"), py::arg("durations"), py::arg("readout") = Readout::Auto);
  m.def("linspace", &linspace, py::arg("start"), py::arg("stop"), py::arg("n"));
  m.def(
      "dominant_frequency",
      [](const std::vector<double>& t, const std::vector<double>& y) { return dominant_frequency(t, y); },
      py::arg("times"), py::arg("values"), "peak frequency in Hz");

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("amplitude", &FitResult::amplitude)
      .def_readonly("frequency", &FitResult::frequency)
      .def_readonly("t2", &FitResult::t2)
      .def_readonly("phase", &FitResult::phase)
      .def_readonly("offset", &FitResult::offset)
      .def_readonly("residual_rms", &FitResult::residual_rms)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("t2_unbounded", &FitResult::t2_unbounded)
      .def_readonly("quality_factor", &FitResult::quality_factor)
      .def_readonly("message", &FitResult::message);
  m.def(
      "fit_decaying_sinusoid",
      [](const std::vector<double>& t, const std::vector<double>& y, std::optional<double> pi_time) {
        return fit_decaying_sinusoid(t, y, pi_time);
      },
      py::arg("times"), py::arg("values"), py::arg("pi_time") = py::none());

  m.def(
      "infidelity_curve",
      [](Scheme s, const DriveConfig& c, ErrorAxis axis, const std::vector<double>& errors) {
        py::gil_scoped_release release;
        return infidelity_curve(s, c, axis, errors);
      },
      py::arg("scheme"), py::arg("cfg"), py::arg("axis"), py::arg("errors"));
  m.def(
      "bloch_trajectory",
      [](Scheme s, const DriveConfig& c, double total_angle, int samples_per_pi2) {
        TrajectoryRecord r;
        {
          py::gil_scoped_release release;
          r = bloch_trajectory(s, c, total_angle, samples_per_pi2);
        }
        std::vector<std::array<double, 4>> samples;
        for (const auto& x : r.samples) samples.push_back({x.t, x.bloch.x, x.bloch.y, x.bloch.z});
        std::vector<std::array<double, 3>> markers;
        for (const auto& b : r.markers) markers.push_back({b.x, b.y, b.z});
        py::dict d;
        d["samples"] = samples;
        d["markers"] = markers;
        d["spread"] = r.spread;
        return d;
      },
      py::arg("scheme"), py::arg("cfg"), py::arg("total_angle"), py::arg("samples_per_pi2") = 16);
  m.def(
      "dressed_sequence",
      [](SequenceKind k, const DriveConfig& c, const std::vector<double>& values) {
        py::gil_scoped_release release;
        return dressed_sequence_experiment(k, c, values);
      },
      py::arg("kind"), py::arg("cfg"), py::arg("values"), "(value, spin-up fraction) pairs");

  py::class_<RBResult>(m, "RBResult")
      .def_readonly("lengths", &RBResult::lengths)
      .def_readonly("signal", &RBResult::signal)
      .def_readonly("signal_stderr", &RBResult::signal_stderr)
      .def_readonly("sequence_signals", &RBResult::sequence_signals)
      .def_readonly("amplitude", &RBResult::amplitude)
      .def_readonly("decay", &RBResult::decay)
      .def_readonly("clifford_fidelity", &RBResult::clifford_fidelity)
      .def_readonly("gate_fidelity", &RBResult::gate_fidelity)
      .def_readonly("converged", &RBResult::converged)
      .def_readonly("depth_warning", &RBResult::depth_warning)
      .def_readonly("message", &RBResult::message);
  m.def(
      "randomized_benchmarking",
      [](Scheme s, const DriveConfig& c, std::vector<int> lengths, int k, std::uint64_t seed, RBMode mode,
         unsigned threads) {
        RBOptions o;
        o.lengths = std::move(lengths);
        o.randomizations = k;
        o.seed = seed;
        o.mode = mode;
        o.run.threads = threads;
        py::gil_scoped_release release;
        return randomized_benchmarking(s, c, o);
      },
      py::arg("scheme"), py::arg("cfg"), py::arg("lengths") = std::vector<int>{1, 2, 4, 8, 16, 32, 64},
      py::arg("k") = 15, py::arg("seed") = 0, py::arg("mode") = RBMode::PulseLevel, py::arg("threads") = 0u);

  m.def(
      "run_command",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "ccdsim");
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = io::run_command(args, out, err);
        }
        return py::make_tuple(code, py::bytes(out.str()), err.str());
      },
      py::arg("args"), "Runs one CLI command; returns (exit code, dataset bytes, diagnostics)");
  m.def(
      "parse_config",
      [](const std::string& text) { return io::emit_config(io::parse_config(text)); },
      py::arg("text"), "Validates a run config and returns its canonical text");
  m.def(
      "config_drive",
      [](const std::string& text) { return io::parse_config(text).drive(); }, py::arg("text"));
}
