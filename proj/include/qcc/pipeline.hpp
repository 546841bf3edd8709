#pragma once

// Experiment orchestration: runs the classical and quantum stages over the
// entries of a bundled CICS dataset and writes one CSV per entry and stage,
// a joined summary.csv and a manifest.json.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qcc/classical.hpp"
#include "qcc/datasets.hpp"
#include "qcc/hilbert.hpp"
#include "qcc/quantum.hpp"
#include "qcc/spectral.hpp"

namespace qcc {

enum class Stage { Trajectory, Poincare, Spectrum, FreqEntropy, EntropyCurve, DensitySpectrum, Lyapunov };

std::string to_string(Stage s);
/// Throws ConfigError for an unknown stage name.
Stage stage_from_string(std::string_view name);

struct ClassicalSettings {
  double dt = 1.0 / 256;
  double t_max = 131072.0;  // trajectory and spectrum record length
  int sample_stride = 32;
  double poincare_t_max = 20000.0;
  double lyapunov_t_max = 10000.0;
  double renorm_interval = kDefaultRenormInterval;
  double drift_budget = kDefaultDriftBudget;
  Window window = Window::Hann;
  double line_threshold = kDefaultLineThreshold;
  double lyapunov_threshold = 0.05;  // above it the continuous frequency entropy is used
  double spectrum_max_omega = 4.0;   // CSV output only
  int trajectory_output_stride = 64;
};

struct QuantumSettings {
  std::optional<BasisTruncation> truncation;  // minimal leakage-passing one when unset
  double t_max = 300.0;
  double dt_sample = 0.5;
  int window_doublings = 2;  // extra doublings of t_max while s_max still moves
  double window_tolerance = 1e-3;
  int gate_extra = 8;  // 0 disables the truncation gate
  double gate_tolerance = 1e-3;
  double leakage_threshold = kDefaultLeakageThreshold;
  std::size_t memory_budget = kDefaultMemoryBudget;
  Subsystem subsystem = Subsystem::Mode1;
  double density_floor = kDefaultDensityFloor;
};

struct ExperimentConfig {
  DatasetId dataset = DatasetId::PeRegular;
  std::set<Stage> stages;
  std::vector<int> entries;          // 1-based indices; empty selects all
  std::vector<std::string> labels;   // label filter; empty selects all
  std::optional<double> spin;        // JC only: rescale the dataset to this J
  ClassicalSettings classical;
  QuantumSettings quantum;
  std::filesystem::path outdir = "qcc-out";
  int workers = 1;
  std::uint64_t seed = 0;  // 0: tangent (1,1,1,1)/2 for Lyapunov; otherwise a seeded random unit tangent

  /// Defaults tuned per dataset (step, record lengths, subsystem, window).
  static ExperimentConfig defaults_for(DatasetId id);

  /// Throws ConfigError when a field is out of range or stages is empty.
  void validate() const;
};

/// JSON text to config; unknown keys and bad values raise ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& config);

/// The dataset the config runs on (spin rescaling applied).
CicsDataset resolve_dataset(const ExperimentConfig& config);
/// 0-based dataset positions selected by the entry and label filters.
std::vector<std::size_t> selected_entries(const ExperimentConfig& config, const CicsDataset& dataset);

struct EntryResult {
  int index = 0;
  std::string label;
  PhasePoint point;
  double energy = 0.0;
  bool ok = true;
  std::string error;
  double seconds = 0.0;
  std::vector<std::filesystem::path> files;

  std::optional<double> s_max;
  std::optional<double> t_of_max;
  std::optional<double> window_t_max;
  bool window_converged = false;
  std::optional<double> gate_s_max;
  std::optional<double> s_fr;
  std::optional<EntropyMode> s_fr_mode;
  std::optional<std::size_t> s_fr_count;
  std::optional<double> lyapunov;
  std::optional<double> participation_ratio;
};

struct EigensystemRecord {
  BasisTruncation truncation;
  Eigen::Index dimension = 0;
  double seconds = 0.0;
  std::string purpose;  // "main" or "gate"
};

struct ExperimentResult {
  ExperimentConfig config;
  CicsDataset dataset;
  std::vector<EntryResult> entries;
  std::optional<BasisTruncation> truncation;
  std::vector<EigensystemRecord> eigensystems;
  std::filesystem::path summary_path;
  std::filesystem::path manifest_path;

  std::size_t failures() const;
  /// Largest |s_max(gate) - s_max| over the entries, when the gate ran.
  std::optional<double> gate_delta() const;
  bool gate_passed() const;
};

/// Runs every stage in `config.stages` (plus their prerequisites) for each
/// selected entry. An entry whose stage throws is recorded as failed and the
/// others continue. The eigensystem is built once per truncation.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace qcc
