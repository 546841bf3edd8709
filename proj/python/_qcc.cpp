#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qcc/classical.hpp"
#include "qcc/datasets.hpp"
#include "qcc/errors.hpp"
#include "qcc/hilbert.hpp"
#include "qcc/models.hpp"
#include "qcc/pipeline.hpp"
#include "qcc/quantum.hpp"
#include "qcc/spectral.hpp"

namespace py = pybind11;
using namespace qcc;

namespace {

std::vector<double> as_vector(py::sequence s) { return s.cast<std::vector<double>>(); }

}  // namespace

PYBIND11_MODULE(_qcc, m) {
  m.doc() = "Quantum-classical correspondence for coupled oscillators";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", error);
  py::register_exception<InfeasibleEnergyError>(m, "InfeasibleEnergyError", error);
  py::register_exception<ResourceError>(m, "ResourceError", error);
  py::register_exception<TruncationError>(m, "TruncationError", error);
  py::register_exception<IntegrationError>(m, "IntegrationError", error);
  auto input_error = py::register_exception<InputError>(m, "InputError", error);
  py::register_exception<EmptyLinesError>(m, "EmptyLinesError", input_error);
  py::register_exception<InvalidDensityError>(m, "InvalidDensityError", input_error);
  py::register_exception<LookupError>(m, "LookupError", error);
  py::register_exception<ConfigError>(m, "ConfigError", error);

  // ---- models -----------------------------------------------------------

  py::class_<PhasePoint>(m, "PhasePoint")
      .def(py::init<>())
      .def(py::init([](double q1, double p1, double q2, double p2) { return PhasePoint{q1, p1, q2, p2}; }),
           py::arg("q1"), py::arg("p1"), py::arg("q2"), py::arg("p2"))
      .def_readwrite("q1", &PhasePoint::q1)
      .def_readwrite("p1", &PhasePoint::p1)
      .def_readwrite("q2", &PhasePoint::q2)
      .def_readwrite("p2", &PhasePoint::p2)
      .def("as_vector", &PhasePoint::as_vector)
      .def("__repr__", [](const PhasePoint& x) {
        return "PhasePoint(" + std::to_string(x.q1) + ", " + std::to_string(x.p1) + ", " + std::to_string(x.q2) +
               ", " + std::to_string(x.p2) + ")";
      });

  py::enum_<ModelKind>(m, "ModelKind")
      .value("PULLEN_EDMONDS", ModelKind::PullenEdmonds)
      .value("JAYNES_CUMMINGS", ModelKind::JaynesCummings);

  py::class_<ModelSpec>(m, "ModelSpec")
      .def_static(
          "pullen_edmonds",
          [](double mass, double omega, double lam) { return ModelSpec::pullen_edmonds({mass, omega, lam}); },
          py::arg("m") = 1.0, py::arg("omega") = 1.0, py::arg("lam") = 0.0075)
      .def_static(
          "jaynes_cummings",
          [](double omega, double epsilon, double G, double Gprime, double J) {
            return ModelSpec::jaynes_cummings({omega, epsilon, G, Gprime, J});
          },
          py::arg("omega") = 1.0, py::arg("epsilon") = 1.0, py::arg("G") = 0.25, py::arg("Gprime") = 0.0,
          py::arg("J") = 29.0)
      .def_property_readonly("kind", &ModelSpec::kind)
      .def("in_domain", &ModelSpec::in_domain)
      .def("describe", &ModelSpec::describe)
      .def("__repr__", &ModelSpec::describe);

  m.def("energy", &energy, py::arg("model"), py::arg("x"));
  m.def("flow", &flow, py::arg("model"), py::arg("x"));
  m.def("solve_p2", &solve_p2, py::arg("model"), py::arg("q1"), py::arg("p1"), py::arg("q2"), py::arg("E"));

  // ---- datasets ---------------------------------------------------------

  py::class_<CicsEntry>(m, "CicsEntry")
      .def_readonly("index", &CicsEntry::index)
      .def_readonly("label", &CicsEntry::label)
      .def_readonly("q1", &CicsEntry::q1)
      .def_readonly("p1", &CicsEntry::p1)
      .def_readonly("q2", &CicsEntry::q2)
      .def_readonly("adjusted", &CicsEntry::adjusted);

  py::class_<CicsDataset>(m, "CicsDataset")
      .def_property_readonly("id", [](const CicsDataset& d) { return to_string(d.id); })
      .def_readonly("model", &CicsDataset::model)
      .def_readonly("energy", &CicsDataset::energy)
      .def_readonly("section_value", &CicsDataset::section_value)
      .def_readonly("entries", &CicsDataset::entries)
      .def("point", &CicsDataset::point, py::arg("i"))
      .def("points", &CicsDataset::points)
      .def("with_label", &CicsDataset::with_label, py::arg("label"))
      .def("__len__", [](const CicsDataset& d) { return d.entries.size(); });

  m.def("dataset_ids", [] {
    std::vector<std::string> out;
    for (DatasetId id : all_datasets()) out.push_back(to_string(id));
    return out;
  });
  m.def("load_cics", py::overload_cast<std::string_view>(&load_cics), py::arg("name"));
  m.def("rescale_spin", &rescale_spin, py::arg("dataset"), py::arg("J"));

  // ---- classical --------------------------------------------------------

  py::enum_<Observable>(m, "Observable").value("Q1", Observable::Q1).value("Q2", Observable::Q2);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("dt", &Trajectory::dt)
      .def_readonly("sample_stride", &Trajectory::sample_stride)
      .def_readonly("samples", &Trajectory::samples)
      .def_readonly("energy0", &Trajectory::energy0)
      .def_readonly("max_drift", &Trajectory::max_drift)
      .def_property_readonly("sample_interval", &Trajectory::sample_interval)
      .def("series", &Trajectory::series, py::arg("observable"))
      .def("__len__", [](const Trajectory& t) { return t.samples.size(); });

  m.def("integrate", &integrate, py::arg("model"), py::arg("x0"), py::arg("dt"), py::arg("t_max"),
        py::arg("sample_stride") = 1, py::arg("drift_budget") = kDefaultDriftBudget);
  m.def(
      "poincare_section",
      [](const ModelSpec& model, const PhasePoint& x0, double value, double t_max, double dt, double budget) {
        const SectionPoints s = poincare_section(model, x0, {value}, t_max, dt, budget);
        return py::make_tuple(s.points, s.crossing_times);
      },
      py::arg("model"), py::arg("x0"), py::arg("section_value"), py::arg("t_max"), py::arg("dt"),
      py::arg("drift_budget") = kDefaultDriftBudget,
      "Returns ([(q1, p1), ...], crossing_times) for upward crossings of q2 = section_value.");
  m.def("lyapunov_max", &lyapunov_max, py::arg("model"), py::arg("x0"), py::arg("t_max"), py::arg("dt"),
        py::arg("renorm_interval") = kDefaultRenormInterval, py::arg("tangent0") = std::nullopt,
        py::arg("drift_budget") = kDefaultDriftBudget);

  // ---- spectral ---------------------------------------------------------

  py::enum_<Window>(m, "Window").value("NONE", Window::None).value("HANN", Window::Hann);
  py::enum_<EntropyMode>(m, "EntropyMode")
      .value("DISCRETE", EntropyMode::Discrete)
      .value("CONTINUOUS", EntropyMode::Continuous);

  py::class_<PowerSpectrum>(m, "PowerSpectrum")
      .def_readonly("observable", &PowerSpectrum::observable)
      .def_readonly("frequencies", &PowerSpectrum::frequencies)
      .def_readonly("intensities", &PowerSpectrum::intensities)
      .def_readonly("duration", &PowerSpectrum::duration)
      .def_readonly("spacing", &PowerSpectrum::spacing)
      .def("total_weight", &PowerSpectrum::total_weight);

  py::class_<SpectralLine>(m, "SpectralLine")
      .def_readonly("omega", &SpectralLine::omega)
      .def_readonly("weight", &SpectralLine::weight);
  py::class_<SpectralLines>(m, "SpectralLines")
      .def(py::init<>())
      .def_readwrite("q1", &SpectralLines::q1)
      .def_readwrite("q2", &SpectralLines::q2)
      .def("total", &SpectralLines::total);

  py::class_<FrequencyEntropyResult>(m, "FrequencyEntropy")
      .def_readonly("value", &FrequencyEntropyResult::value)
      .def_readonly("mode", &FrequencyEntropyResult::mode)
      .def_readonly("count", &FrequencyEntropyResult::count);

  m.def(
      "power_spectrum",
      [](py::sequence series, double dt_sample, Window window, Observable obs) {
        const auto v = as_vector(series);
        return power_spectrum(v, dt_sample, window, obs);
      },
      py::arg("series"), py::arg("dt_sample"), py::arg("window") = Window::Hann,
      py::arg("observable") = Observable::Q1);
  m.def("extract_lines", &extract_lines, py::arg("q1"), py::arg("q2"),
        py::arg("rel_threshold") = kDefaultLineThreshold);
  m.def(
      "line",
      [](double omega, double weight) { return SpectralLine{omega, weight}; }, py::arg("omega"),
      py::arg("weight"));
  m.def("frequency_entropy", &frequency_entropy, py::arg("lines"));
  m.def("frequency_entropy_continuous", &frequency_entropy_continuous, py::arg("q1"), py::arg("q2"));

  // ---- quantum ----------------------------------------------------------

  py::class_<BasisTruncation>(m, "BasisTruncation")
      .def_static("pullen_edmonds", &BasisTruncation::pullen_edmonds, py::arg("n1_max"), py::arg("n2_max"),
                  py::arg("shell_max") = std::nullopt)
      .def_static("pullen_edmonds_shell", &BasisTruncation::pullen_edmonds_shell, py::arg("shell_max"))
      .def_static("jaynes_cummings", &BasisTruncation::jaynes_cummings, py::arg("n_ph_max"))
      .def_readonly("n1_max", &BasisTruncation::n1_max)
      .def_readonly("n2_max", &BasisTruncation::n2_max)
      .def_readonly("n_ph_max", &BasisTruncation::n_ph_max)
      .def_readonly("shell_max", &BasisTruncation::shell_max);

  py::class_<QuantumState>(m, "QuantumState")
      .def_readonly("amplitudes", &QuantumState::amplitudes)
      .def("norm", &QuantumState::norm)
      .def("as_matrix", &QuantumState::as_matrix);

  py::enum_<Subsystem>(m, "Subsystem")
      .value("MODE1", Subsystem::Mode1)
      .value("MODE2", Subsystem::Mode2)
      .value("ATOM", Subsystem::Atom)
      .value("FIELD", Subsystem::Field);

  py::class_<EigenSystem>(m, "EigenSystem")
      .def_property_readonly("dimension", &EigenSystem::dimension)
      .def_property_readonly("eigenvalues", &EigenSystem::eigenvalues)
      .def("eigenvector", &EigenSystem::eigenvector, py::arg("n"));

  py::class_<EntropyCurve>(m, "EntropyCurve")
      .def_readonly("times", &EntropyCurve::times)
      .def_readonly("values", &EntropyCurve::values)
      .def_readonly("s_max", &EntropyCurve::s_max)
      .def_readonly("t_of_max", &EntropyCurve::t_of_max);

  py::class_<DensityLine>(m, "DensityLine")
      .def_readonly("energy", &DensityLine::energy)
      .def_readonly("population", &DensityLine::population);
  py::class_<DensitySpectrum>(m, "DensitySpectrum")
      .def_readonly("lines", &DensitySpectrum::lines)
      .def_readonly("participation_ratio", &DensitySpectrum::participation_ratio)
      .def_readonly("total_population", &DensitySpectrum::total_population);

  m.def("minimal_truncation", &minimal_truncation, py::arg("model"), py::arg("centres"),
        py::arg("leakage_threshold") = kDefaultLeakageThreshold);
  m.def("initial_coherent_state", &initial_coherent_state, py::arg("model"), py::arg("x"), py::arg("truncation"),
        py::arg("leakage_threshold") = kDefaultLeakageThreshold);
  m.def(
      "diagonalize",
      [](const ModelSpec& model, const BasisTruncation& trunc) {
        return diagonalize(build_hamiltonian(model, trunc));
      },
      py::arg("model"), py::arg("truncation"), py::call_guard<py::gil_scoped_release>(),
      "Builds the truncated Hamiltonian and diagonalizes it block by block.");
  m.def(
      "entropy_values",
      [](const EigenSystem& es, const QuantumState& psi0, py::sequence times, Subsystem subsystem) {
        const auto t = as_vector(times);
        py::gil_scoped_release release;
        return entropy_values(es, psi0, t, subsystem);
      },
      py::arg("eigensystem"), py::arg("psi0"), py::arg("times"), py::arg("subsystem"));
  m.def("entropy_curve", &entropy_curve, py::arg("eigensystem"), py::arg("psi0"), py::arg("t_max"),
        py::arg("dt_sample"), py::arg("subsystem"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "reduced_density",
      [](const QuantumState& psi, Subsystem s) { return reduced_density(psi, s).matrix; }, py::arg("psi"),
      py::arg("subsystem"));
  m.def(
      "von_neumann_entropy",
      [](const QuantumState& psi, Subsystem s) { return von_neumann_entropy(reduced_density(psi, s)); },
      py::arg("psi"), py::arg("subsystem"));
  m.def("density_spectrum", &density_spectrum, py::arg("eigensystem"), py::arg("psi0"),
        py::arg("floor") = kDefaultDensityFloor);

  // ---- pipeline ---------------------------------------------------------

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_static("from_json", &parse_config, py::arg("text"))
      .def_static("load", &load_config, py::arg("path"))
      .def("to_json", &config_to_json)
      .def("validate", &ExperimentConfig::validate)
      .def_property(
          "outdir", [](const ExperimentConfig& c) { return c.outdir; },
          [](ExperimentConfig& c, const std::filesystem::path& p) { c.outdir = p; })
      .def_readwrite("workers", &ExperimentConfig::workers)
      .def_readwrite("seed", &ExperimentConfig::seed);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("summary_path", &ExperimentResult::summary_path)
      .def_readonly("manifest_path", &ExperimentResult::manifest_path)
      .def("failures", &ExperimentResult::failures)
      .def("gate_delta", &ExperimentResult::gate_delta)
      .def("gate_passed", &ExperimentResult::gate_passed)
      .def_property_readonly("entries", [](const ExperimentResult& r) { return r.entries.size(); });

  m.def("run_experiment", &run_experiment, py::arg("config"), py::call_guard<py::gil_scoped_release>());
}
