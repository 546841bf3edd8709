// qcc command-line front end.
//
// Exit codes: 0 when every entry succeeded, 2 when some entries failed,
// 1 for configuration or usage errors.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcc/errors.hpp"
#include "qcc/io.hpp"
#include "qcc/pipeline.hpp"

namespace {

using namespace qcc;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

struct GlobalFlags {
  std::optional<std::string> outdir;
  std::optional<int> workers;
  std::optional<std::uint64_t> seed;
};

// Flags shared by the per-stage subcommands.
struct RunFlags {
  std::string dataset;
  std::vector<int> entries;
  std::vector<std::string> labels;
  std::vector<std::string> stages;
  std::optional<double> spin;
  std::optional<double> dt;
  std::optional<double> t_max;
  std::optional<std::string> window;
  std::optional<int> shell;
  std::optional<int> n_ph;
  std::optional<int> gate_extra;
  std::optional<int> window_doublings;
  std::optional<std::string> subsystem;
};

void apply_globals(const GlobalFlags& g, ExperimentConfig& c) {
  if (g.outdir) c.outdir = *g.outdir;
  if (g.workers) c.workers = *g.workers;
  if (g.seed) c.seed = *g.seed;
}

void add_run_flags(CLI::App* cmd, RunFlags& f, const std::string& default_stages) {
  cmd->add_option("dataset", f.dataset, "pe-regular, pe-mixed, jc-regular or jc-mixed")->required();
  cmd->add_option("--entry", f.entries, "1-based entry index (repeatable; default all)");
  cmd->add_option("--label", f.labels, "only entries with this label (repeatable)");
  cmd->add_option("--stages", f.stages, "stages to run (default: " + default_stages + ")")->delimiter(',');
  cmd->add_option("--spin", f.spin, "JC datasets: rescale to this spin J");
}

void add_classical_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--dt", f.dt, "integration step");
  cmd->add_option("--t-max", f.t_max, "trajectory length");
}

int run(ExperimentConfig c) {
  c.validate();
  const ExperimentResult res = run_experiment(c);
  for (const auto& e : res.entries) {
    if (!e.ok) std::cerr << "entry " << e.index << " (" << e.label << ") failed: " << e.error << '\n';
  }
  std::cout << "wrote " << res.summary_path.string() << " and " << res.manifest_path.string() << " ("
            << res.entries.size() - res.failures() << "/" << res.entries.size() << " entries ok)\n";
  if (auto d = res.gate_delta()) {
    std::cout << "truncation gate: max |dS_M| = " << *d << (res.gate_passed() ? " (passed)" : " (FAILED)") << '\n';
  }
  return res.failures() == 0 ? kExitOk : kExitPartial;
}

ExperimentConfig config_from_flags(const RunFlags& f, const GlobalFlags& g, const std::vector<Stage>& defaults) {
  ExperimentConfig c;
  try {
    c = ExperimentConfig::defaults_for(dataset_from_string(f.dataset));
  } catch (const LookupError& e) {
    throw ConfigError(e.what());
  }
  if (f.stages.empty()) {
    c.stages.insert(defaults.begin(), defaults.end());
  } else {
    for (const auto& s : f.stages) c.stages.insert(stage_from_string(s));
  }
  c.entries = f.entries;
  c.labels = f.labels;
  c.spin = f.spin;
  if (f.dt) c.classical.dt = *f.dt;
  if (f.t_max) c.classical.t_max = *f.t_max;
  if (f.window) {
    try {
      c.classical.window = window_from_string(*f.window);
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }
  apply_globals(g, c);
  return c;
}

void list_datasets() {
  std::cout << "id,model,E,section_q2,entries\n";
  for (DatasetId id : all_datasets()) {
    const CicsDataset d = load_cics(id);
    std::cout << to_string(id) << ",\"" << d.model.describe() << "\"," << io::format_double(d.energy) << ','
              << io::format_double(d.section_value) << ',' << d.entries.size() << '\n';
  }
}

void show_cics(const std::string& name, std::optional<double> spin) {
  CicsDataset d = load_cics(name);
  if (spin) d = rescale_spin(d, *spin);
  std::cout << "index,label,q1,p1,q2,p2,adjusted\n";
  for (std::size_t i = 0; i < d.entries.size(); ++i) {
    const auto& e = d.entries[i];
    const PhasePoint x = d.point(i);
    std::cout << e.index << ',' << e.label << ',' << io::format_double(x.q1) << ',' << io::format_double(x.p1)
              << ',' << io::format_double(x.q2) << ',' << io::format_double(x.p2) << ',' << (e.adjusted ? 1 : 0)
              << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-classical correspondence experiments for coupled oscillators"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--outdir", g.outdir, "output directory (default qcc-out)");
  app.add_option("--workers", g.workers, "parallel entries")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for random Lyapunov tangents (0: fixed tangent)");
  app.fallthrough();

  auto* list_cmd = app.add_subcommand("list-datasets", "list the bundled initial-condition datasets");

  std::string show_name;
  std::optional<double> show_spin;
  auto* show_cmd = app.add_subcommand("show-cics", "print the phase points of a dataset");
  show_cmd->add_option("dataset", show_name, "dataset id")->required();
  show_cmd->add_option("--spin", show_spin, "JC datasets: rescale to this spin J");

  RunFlags classical_flags;
  double poincare_t_max = 0.0;
  std::optional<double> lyapunov_t_max;
  auto* classical_cmd = app.add_subcommand("classical", "trajectories, Poincare sections and Lyapunov exponents");
  add_run_flags(classical_cmd, classical_flags, "poincare,lyapunov");
  add_classical_flags(classical_cmd, classical_flags);
  classical_cmd->add_option("--poincare-t-max", poincare_t_max, "integration time for the section");
  classical_cmd->add_option("--lyapunov-t-max", lyapunov_t_max, "integration time for the Lyapunov exponent");

  RunFlags spectrum_flags;
  std::optional<double> line_threshold;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "power spectra and frequency entropies");
  add_run_flags(spectrum_cmd, spectrum_flags, "spectrum,freq-entropy");
  add_classical_flags(spectrum_cmd, spectrum_flags);
  spectrum_cmd->add_option("--window", spectrum_flags.window, "hann or none");
  spectrum_cmd->add_option("--line-threshold", line_threshold, "relative line threshold");

  RunFlags quantum_flags;
  std::optional<double> quantum_t_max;
  auto* quantum_cmd = app.add_subcommand("quantum", "entanglement entropy curves and density spectra");
  add_run_flags(quantum_cmd, quantum_flags, "entropy-curve,density-spectrum");
  quantum_cmd->add_option("--t-max", quantum_t_max, "entropy window");
  quantum_cmd->add_option("--shell", quantum_flags.shell, "PE: truncate to n1 + n2 <= shell");
  quantum_cmd->add_option("--n-ph", quantum_flags.n_ph, "JC: photon cutoff");
  quantum_cmd->add_option("--gate-extra", quantum_flags.gate_extra, "cutoff increase for the convergence gate (0: off)");
  quantum_cmd->add_option("--window-doublings", quantum_flags.window_doublings, "maximum doublings of the window");
  quantum_cmd->add_option("--subsystem", quantum_flags.subsystem, "mode1, mode2, atom or field");

  std::string config_path;
  auto* experiment_cmd = app.add_subcommand("experiment", "run a JSON experiment config");
  experiment_cmd->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (list_cmd->parsed()) {
      list_datasets();
      return kExitOk;
    }
    if (show_cmd->parsed()) {
      show_cics(show_name, show_spin);
      return kExitOk;
    }
    if (classical_cmd->parsed()) {
      ExperimentConfig c = config_from_flags(classical_flags, g, {Stage::Poincare, Stage::Lyapunov});
      if (poincare_t_max > 0.0) c.classical.poincare_t_max = poincare_t_max;
      if (lyapunov_t_max) c.classical.lyapunov_t_max = *lyapunov_t_max;
      return run(c);
    }
    if (spectrum_cmd->parsed()) {
      ExperimentConfig c = config_from_flags(spectrum_flags, g, {Stage::Spectrum, Stage::FreqEntropy});
      if (line_threshold) c.classical.line_threshold = *line_threshold;
      return run(c);
    }
    if (quantum_cmd->parsed()) {
      ExperimentConfig c = config_from_flags(quantum_flags, g, {Stage::EntropyCurve, Stage::DensitySpectrum});
      if (quantum_t_max) c.quantum.t_max = *quantum_t_max;
      if (quantum_flags.shell) c.quantum.truncation = BasisTruncation::pullen_edmonds_shell(*quantum_flags.shell);
      if (quantum_flags.n_ph) c.quantum.truncation = BasisTruncation::jaynes_cummings(*quantum_flags.n_ph);
      if (quantum_flags.gate_extra) c.quantum.gate_extra = *quantum_flags.gate_extra;
      if (quantum_flags.window_doublings) c.quantum.window_doublings = *quantum_flags.window_doublings;
      if (quantum_flags.subsystem) {
        try {
          c.quantum.subsystem = subsystem_from_string(*quantum_flags.subsystem);
        } catch (const InputError& e) {
          throw ConfigError(e.what());
        }
      }
      return run(c);
    }
    ExperimentConfig c = load_config(config_path);
    apply_globals(g, c);
    return run(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
