#include "qcc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qcc/errors.hpp"
#include "qcc/io.hpp"

namespace qcc {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct StageName {
  Stage stage;
  const char* name;
};

constexpr StageName kStages[] = {
    {Stage::Trajectory, "trajectory"},        {Stage::Poincare, "poincare"},
    {Stage::Spectrum, "spectrum"},            {Stage::FreqEntropy, "freq-entropy"},
    {Stage::EntropyCurve, "entropy-curve"},   {Stage::DensitySpectrum, "density-spectrum"},
    {Stage::Lyapunov, "lyapunov"},
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---- config parsing -------------------------------------------------------

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "' in " + where);
  }
}

BasisTruncation truncation_from_json(const json& j) {
  reject_unknown(j, {"n1_max", "n2_max", "shell_max", "n_ph_max"}, "quantum.truncation");
  BasisTruncation t;
  read(j, "n1_max", t.n1_max, "quantum.truncation");
  read(j, "n2_max", t.n2_max, "quantum.truncation");
  read(j, "n_ph_max", t.n_ph_max, "quantum.truncation");
  if (j.contains("shell_max")) {
    int shell = 0;
    read(j, "shell_max", shell, "quantum.truncation");
    t.shell_max = shell;
    if (!j.contains("n1_max")) t.n1_max = shell;
    if (!j.contains("n2_max")) t.n2_max = shell;
  }
  return t;
}

json truncation_to_json(const BasisTruncation& t) {
  json j{{"n1_max", t.n1_max}, {"n2_max", t.n2_max}, {"n_ph_max", t.n_ph_max}};
  if (t.shell_max) j["shell_max"] = *t.shell_max;
  return j;
}

void read_classical(const json& j, ClassicalSettings& c) {
  const std::string where = "classical";
  reject_unknown(j,
                 {"dt", "t_max", "sample_stride", "poincare_t_max", "lyapunov_t_max", "renorm_interval",
                  "drift_budget", "window", "line_threshold", "lyapunov_threshold", "spectrum_max_omega",
                  "trajectory_output_stride"},
                 where);
  read(j, "dt", c.dt, where);
  read(j, "t_max", c.t_max, where);
  read(j, "sample_stride", c.sample_stride, where);
  read(j, "poincare_t_max", c.poincare_t_max, where);
  read(j, "lyapunov_t_max", c.lyapunov_t_max, where);
  read(j, "renorm_interval", c.renorm_interval, where);
  read(j, "drift_budget", c.drift_budget, where);
  read(j, "line_threshold", c.line_threshold, where);
  read(j, "lyapunov_threshold", c.lyapunov_threshold, where);
  read(j, "spectrum_max_omega", c.spectrum_max_omega, where);
  read(j, "trajectory_output_stride", c.trajectory_output_stride, where);
  if (j.contains("window")) {
    std::string name;
    read(j, "window", name, where);
    try {
      c.window = window_from_string(name);
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }
}

void read_quantum(const json& j, QuantumSettings& q) {
  const std::string where = "quantum";
  reject_unknown(j,
                 {"truncation", "t_max", "dt_sample", "window_doublings", "window_tolerance", "gate_extra",
                  "gate_tolerance", "leakage_threshold", "memory_budget_mib", "subsystem", "density_floor"},
                 where);
  if (j.contains("truncation") && !j.at("truncation").is_null()) q.truncation = truncation_from_json(j.at("truncation"));
  read(j, "t_max", q.t_max, where);
  read(j, "dt_sample", q.dt_sample, where);
  read(j, "window_doublings", q.window_doublings, where);
  read(j, "window_tolerance", q.window_tolerance, where);
  read(j, "gate_extra", q.gate_extra, where);
  read(j, "gate_tolerance", q.gate_tolerance, where);
  read(j, "leakage_threshold", q.leakage_threshold, where);
  read(j, "density_floor", q.density_floor, where);
  if (j.contains("memory_budget_mib")) {
    double mib = 0.0;
    read(j, "memory_budget_mib", mib, where);
    if (!(mib > 0.0)) throw ConfigError("quantum.memory_budget_mib must be positive");
    q.memory_budget = static_cast<std::size_t>(mib * (1 << 20));
  }
  if (j.contains("subsystem")) {
    std::string name;
    read(j, "subsystem", name, where);
    try {
      q.subsystem = subsystem_from_string(name);
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }
}

// ---- per-entry work -------------------------------------------------------

struct Context {
  const ExperimentConfig& config;
  const CicsDataset& dataset;
  std::filesystem::path entry_dir;
  const EigenSystem* eigensystem = nullptr;
  std::optional<BasisTruncation> truncation;
};

bool wants(const ExperimentConfig& c, Stage s) { return c.stages.count(s) > 0; }

bool needs_trajectory(const ExperimentConfig& c) {
  return wants(c, Stage::Trajectory) || wants(c, Stage::Spectrum) || wants(c, Stage::FreqEntropy);
}

bool needs_lyapunov(const ExperimentConfig& c) { return wants(c, Stage::Lyapunov) || wants(c, Stage::FreqEntropy); }

bool needs_quantum(const ExperimentConfig& c) {
  return wants(c, Stage::EntropyCurve) || wants(c, Stage::DensitySpectrum);
}

std::optional<Vec4> initial_tangent(std::uint64_t seed, int index) {
  if (seed == 0) return std::nullopt;
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(index));
  std::normal_distribution<double> g;
  Vec4 v(g(rng), g(rng), g(rng), g(rng));
  return v.normalized();
}

std::filesystem::path entry_file(const Context& ctx, const EntryResult& r, const std::string& stage) {
  return ctx.entry_dir / (std::to_string(r.index) + "_" + stage + ".csv");
}

// S_V over [0, t_max], doubling t_max while s_max still moves by more than
// the tolerance, at most `window_doublings` times.
EntropyCurve windowed_entropy(const EigenSystem& es, const QuantumState& psi, const QuantumSettings& q,
                              bool& converged) {
  EntropyCurve curve = entropy_curve(es, psi, q.t_max, q.dt_sample, q.subsystem);
  converged = q.window_doublings == 0;
  double t_end = q.t_max;
  for (int d = 0; d < q.window_doublings; ++d) {
    std::vector<double> times;
    const double t_next = 2.0 * t_end;
    for (std::size_t k = curve.times.size();; ++k) {
      const double t = static_cast<double>(k) * q.dt_sample;
      if (t > t_next + 1e-9 * q.dt_sample) break;
      times.push_back(t);
    }
    const std::vector<double> values = entropy_values(es, psi, times, q.subsystem);
    const double previous = curve.s_max;
    curve.times.insert(curve.times.end(), times.begin(), times.end());
    curve.values.insert(curve.values.end(), values.begin(), values.end());
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (values[k] > curve.s_max) {
        curve.s_max = values[k];
        curve.t_of_max = times[k];
      }
    }
    t_end = t_next;
    if (curve.s_max - previous < q.window_tolerance) {
      converged = true;
      break;
    }
  }
  return curve;
}

void run_classical(const Context& ctx, EntryResult& r) {
  const auto& c = ctx.config.classical;
  const ModelSpec& model = ctx.dataset.model;
  const ExperimentConfig& cfg = ctx.config;

  if (needs_lyapunov(cfg)) {
    r.lyapunov = lyapunov_max(model, r.point, c.lyapunov_t_max, c.dt, c.renorm_interval,
                              initial_tangent(cfg.seed, r.index), c.drift_budget);
    if (wants(cfg, Stage::Lyapunov)) {
      const auto path = entry_file(ctx, r, "lyapunov");
      io::write_csv(path, {"t_max", "dt", "renorm_interval", "lambda_max"},
                    {{io::format_double(c.lyapunov_t_max), io::format_double(c.dt),
                      io::format_double(c.renorm_interval), io::format_double(*r.lyapunov)}});
      r.files.push_back(path);
    }
  }

  if (needs_trajectory(cfg)) {
    const Trajectory traj = integrate(model, r.point, c.dt, c.t_max, c.sample_stride, c.drift_budget);
    if (wants(cfg, Stage::Trajectory)) {
      const auto path = entry_file(ctx, r, "trajectory");
      io::write_trajectory_csv(path, traj, c.trajectory_output_stride);
      r.files.push_back(path);
    }
    if (wants(cfg, Stage::Spectrum) || wants(cfg, Stage::FreqEntropy)) {
      const auto s1 = power_spectrum(traj.series(Observable::Q1), traj.sample_interval(), c.window, Observable::Q1);
      const auto s2 = power_spectrum(traj.series(Observable::Q2), traj.sample_interval(), c.window, Observable::Q2);
      if (wants(cfg, Stage::Spectrum)) {
        for (const auto* s : {&s1, &s2}) {
          const auto path = entry_file(ctx, r, s == &s1 ? "spectrum-q1" : "spectrum-q2");
          io::write_spectrum_csv(path, *s, c.spectrum_max_omega);
          r.files.push_back(path);
        }
      }
      if (wants(cfg, Stage::FreqEntropy)) {
        FrequencyEntropyResult fe;
        if (*r.lyapunov > c.lyapunov_threshold) {
          fe = frequency_entropy_continuous(s1, s2);
        } else {
          const SpectralLines lines = extract_lines(s1, s2, c.line_threshold);
          fe = frequency_entropy(lines);
          const auto path = entry_file(ctx, r, "lines");
          io::write_lines_csv(path, lines);
          r.files.push_back(path);
        }
        r.s_fr = fe.value;
        r.s_fr_mode = fe.mode;
        r.s_fr_count = fe.count;
        const auto path = entry_file(ctx, r, "freq-entropy");
        io::write_csv(path, {"mode", "S_Fr", "count", "lyapunov"},
                      {{to_string(fe.mode), io::format_double(fe.value), std::to_string(fe.count),
                        io::format_double(*r.lyapunov)}});
        r.files.push_back(path);
      }
    }
  }

  if (wants(cfg, Stage::Poincare)) {
    const auto section = poincare_section(model, r.point, {ctx.dataset.section_value}, c.poincare_t_max, c.dt,
                                          c.drift_budget);
    const auto path = entry_file(ctx, r, "poincare");
    io::write_section_csv(path, section);
    r.files.push_back(path);
  }
}

void run_quantum(const Context& ctx, EntryResult& r) {
  const auto& q = ctx.config.quantum;
  const QuantumState psi = initial_coherent_state(ctx.dataset.model, r.point, *ctx.truncation, q.leakage_threshold);
  if (wants(ctx.config, Stage::EntropyCurve)) {
    bool converged = false;
    const EntropyCurve curve = windowed_entropy(*ctx.eigensystem, psi, q, converged);
    r.s_max = curve.s_max;
    r.t_of_max = curve.t_of_max;
    r.window_t_max = curve.times.back();
    r.window_converged = converged;
    const auto path = entry_file(ctx, r, "entropy-curve");
    io::write_entropy_curve_csv(path, curve);
    r.files.push_back(path);
  }
  if (wants(ctx.config, Stage::DensitySpectrum)) {
    const DensitySpectrum spec = density_spectrum(*ctx.eigensystem, psi, q.density_floor);
    r.participation_ratio = spec.participation_ratio;
    const auto path = entry_file(ctx, r, "density-spectrum");
    io::write_density_spectrum_csv(path, spec);
    r.files.push_back(path);
  }
}

template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const auto threads = static_cast<std::size_t>(std::max(1, std::min<int>(workers, static_cast<int>(count))));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
}

EigenSystem build_eigensystem(const CicsDataset& d, const BasisTruncation& trunc, const QuantumSettings& q,
                              const std::string& purpose, std::vector<EigensystemRecord>& log) {
  const auto start = Clock::now();
  EigenSystem es = diagonalize(build_hamiltonian(d.model, trunc, q.memory_budget));
  log.push_back({trunc, es.dimension(), seconds_since(start), purpose});
  return es;
}

// ---- outputs ----------------------------------------------------------------

std::string opt(const std::optional<double>& v) { return v ? io::format_double(*v) : ""; }

void write_summary(const ExperimentResult& res) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : res.entries) {
    std::optional<double> gate;
    if (e.gate_s_max && e.s_max) gate = std::abs(*e.gate_s_max - *e.s_max);
    rows.push_back({to_string(res.dataset.id), std::to_string(e.index), e.label, io::format_double(e.point.q1),
                    io::format_double(e.point.p1), io::format_double(e.point.q2), io::format_double(e.point.p2),
                    io::format_double(e.energy), opt(e.s_max), opt(e.t_of_max), opt(e.window_t_max),
                    e.s_max ? (e.window_converged ? "1" : "0") : "", opt(gate), opt(e.s_fr),
                    e.s_fr_mode ? to_string(*e.s_fr_mode) : "", e.s_fr_count ? std::to_string(*e.s_fr_count) : "",
                    opt(e.lyapunov), opt(e.participation_ratio), e.ok ? "ok" : "failed"});
  }
  io::write_csv(res.summary_path,
                {"dataset", "index", "label", "q1", "p1", "q2", "p2", "E", "S_M", "t_of_max", "window_t_max",
                 "window_converged", "gate_delta", "S_Fr", "S_Fr_mode", "S_Fr_count", "lyapunov",
                 "participation_ratio", "status"},
                rows);
}

void write_manifest(const ExperimentResult& res, double total_seconds) {
  json entries = json::array();
  for (const auto& e : res.entries) {
    json files = json::array();
    for (const auto& f : e.files) files.push_back(f.lexically_relative(res.config.outdir).generic_string());
    json item{{"index", e.index}, {"label", e.label}, {"status", e.ok ? "ok" : "failed"},
              {"seconds", e.seconds}, {"files", files}};
    if (!e.ok) item["error"] = e.error;
    if (e.window_t_max) {
      item["window_t_max"] = *e.window_t_max;
      item["window_converged"] = e.window_converged;
    }
    entries.push_back(item);
  }
  json eig = json::array();
  for (const auto& r : res.eigensystems) {
    eig.push_back({{"purpose", r.purpose}, {"truncation", truncation_to_json(r.truncation)},
                   {"dimension", r.dimension}, {"seconds", r.seconds}});
  }
  json manifest{{"dataset", to_string(res.dataset.id)},
                {"model", res.dataset.model.describe()},
                {"energy", res.dataset.energy},
                {"config", json::parse(config_to_json(res.config))},
                {"entries", entries},
                {"failures", res.failures()},
                {"summary", res.summary_path.filename().generic_string()},
                {"timing", {{"total_seconds", total_seconds}, {"eigensystem_builds", res.eigensystems.size()},
                            {"eigensystems", eig}}}};
  if (res.truncation) manifest["truncation"] = truncation_to_json(*res.truncation);
  if (auto d = res.gate_delta()) {
    manifest["gate"] = {{"extra", res.config.quantum.gate_extra}, {"max_delta", *d},
                        {"tolerance", res.config.quantum.gate_tolerance}, {"passed", res.gate_passed()}};
  }
  std::ofstream out(res.manifest_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + res.manifest_path.string());
  out << manifest.dump(2) << '\n';
}

}  // namespace

std::string to_string(Stage s) {
  for (const auto& n : kStages) {
    if (n.stage == s) return n.name;
  }
  return "trajectory";
}

Stage stage_from_string(std::string_view name) {
  for (const auto& n : kStages) {
    if (name == n.name) return n.stage;
  }
  throw ConfigError("unknown stage '" + std::string(name) + "'");
}

ExperimentConfig ExperimentConfig::defaults_for(DatasetId id) {
  ExperimentConfig c;
  c.dataset = id;
  if (id == DatasetId::JcRegular || id == DatasetId::JcMixed) {
    c.classical.dt = 1.0 / 512;      // RK4 drift ~5e-10 over the record
    c.classical.t_max = 524288.0;    // ~5e5
    c.classical.sample_stride = 256;  // dt_sample = 0.5, 2^20 samples
    c.classical.trajectory_output_stride = 16;
    c.quantum.t_max = 350.0;
    c.quantum.window_doublings = 0;
    c.quantum.subsystem = Subsystem::Atom;
  }
  return c;
}

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(!stages.empty(), "stages must not be empty");
  require(workers >= 1, "workers must be >= 1");
  for (int i : entries) require(i >= 1, "entry indices are 1-based");

  const auto& c = classical;
  require(c.dt > 0.0 && std::isfinite(c.dt), "classical.dt must be positive");
  require(c.t_max >= c.dt, "classical.t_max must be at least one step");
  require(c.sample_stride >= 1, "classical.sample_stride must be >= 1");
  require(c.poincare_t_max >= c.dt, "classical.poincare_t_max must be at least one step");
  require(c.lyapunov_t_max >= c.dt, "classical.lyapunov_t_max must be at least one step");
  require(c.renorm_interval >= c.dt, "classical.renorm_interval must be >= dt");
  require(c.drift_budget > 0.0, "classical.drift_budget must be positive");
  require(c.line_threshold > 0.0 && c.line_threshold < 1.0, "classical.line_threshold must lie in (0, 1)");
  require(c.lyapunov_threshold >= 0.0, "classical.lyapunov_threshold must be >= 0");
  require(c.trajectory_output_stride >= 1, "classical.trajectory_output_stride must be >= 1");
  require(std::llround(c.t_max / c.dt) / c.sample_stride >= 16, "classical record gives fewer than 16 samples");

  const auto& q = quantum;
  require(q.t_max >= 0.0 && q.dt_sample > 0.0, "quantum.t_max must be >= 0 and dt_sample > 0");
  require(q.window_doublings >= 0 && q.window_doublings <= 10, "quantum.window_doublings must lie in [0, 10]");
  require(q.window_tolerance > 0.0, "quantum.window_tolerance must be positive");
  require(q.gate_extra >= 0, "quantum.gate_extra must be >= 0");
  require(q.gate_tolerance > 0.0, "quantum.gate_tolerance must be positive");
  require(q.leakage_threshold > 0.0 && q.leakage_threshold < 1.0, "quantum.leakage_threshold must lie in (0, 1)");
  require(q.density_floor >= 0.0, "quantum.density_floor must be >= 0");

  const bool jc = dataset == DatasetId::JcRegular || dataset == DatasetId::JcMixed;
  if (spin) {
    require(jc, "spin applies to Jaynes-Cummings datasets only");
    require(*spin > 0.0 && std::abs(2.0 * *spin - std::round(2.0 * *spin)) < 1e-12, "spin must be a positive half-integer");
  }
  const bool atomic = q.subsystem == Subsystem::Atom || q.subsystem == Subsystem::Field;
  require(jc == atomic, "quantum.subsystem does not match the dataset's model");
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"dataset", "stages", "entries", "labels", "spin", "classical", "quantum", "outdir", "workers", "seed"},
                 "config");
  if (!j.contains("dataset")) throw ConfigError("config needs a 'dataset'");
  std::string name;
  read(j, "dataset", name, "config");
  DatasetId id;
  try {
    id = dataset_from_string(name);
  } catch (const LookupError& e) {
    throw ConfigError(e.what());
  }

  ExperimentConfig c = ExperimentConfig::defaults_for(id);
  std::vector<std::string> stages;
  read(j, "stages", stages, "config");
  for (const auto& s : stages) c.stages.insert(stage_from_string(s));
  read(j, "entries", c.entries, "config");
  read(j, "labels", c.labels, "config");
  if (j.contains("spin") && !j.at("spin").is_null()) {
    double spin = 0.0;
    read(j, "spin", spin, "config");
    c.spin = spin;
  }
  if (j.contains("classical")) read_classical(j.at("classical"), c.classical);
  if (j.contains("quantum")) read_quantum(j.at("quantum"), c.quantum);
  std::string outdir = c.outdir.string();
  read(j, "outdir", outdir, "config");
  c.outdir = outdir;
  read(j, "workers", c.workers, "config");
  read(j, "seed", c.seed, "config");
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json stages = json::array();
  for (Stage s : c.stages) stages.push_back(to_string(s));
  const auto& cl = c.classical;
  const auto& q = c.quantum;
  json quantum{{"t_max", q.t_max},
               {"dt_sample", q.dt_sample},
               {"window_doublings", q.window_doublings},
               {"window_tolerance", q.window_tolerance},
               {"gate_extra", q.gate_extra},
               {"gate_tolerance", q.gate_tolerance},
               {"leakage_threshold", q.leakage_threshold},
               {"memory_budget_mib", static_cast<double>(q.memory_budget) / (1 << 20)},
               {"subsystem", to_string(q.subsystem)},
               {"density_floor", q.density_floor}};
  if (q.truncation) quantum["truncation"] = truncation_to_json(*q.truncation);
  json j{{"dataset", to_string(c.dataset)},
         {"stages", stages},
         {"entries", c.entries},
         {"labels", c.labels},
         {"classical",
          {{"dt", cl.dt},
           {"t_max", cl.t_max},
           {"sample_stride", cl.sample_stride},
           {"poincare_t_max", cl.poincare_t_max},
           {"lyapunov_t_max", cl.lyapunov_t_max},
           {"renorm_interval", cl.renorm_interval},
           {"drift_budget", cl.drift_budget},
           {"window", to_string(cl.window)},
           {"line_threshold", cl.line_threshold},
           {"lyapunov_threshold", cl.lyapunov_threshold},
           {"spectrum_max_omega", cl.spectrum_max_omega},
           {"trajectory_output_stride", cl.trajectory_output_stride}}},
         {"quantum", quantum},
         {"outdir", c.outdir.generic_string()},
         {"workers", c.workers},
         {"seed", c.seed}};
  if (c.spin) j["spin"] = *c.spin;
  return j.dump(2);
}

CicsDataset resolve_dataset(const ExperimentConfig& config) {
  CicsDataset d = load_cics(config.dataset);
  if (config.spin) d = rescale_spin(d, *config.spin);
  return d;
}

std::vector<std::size_t> selected_entries(const ExperimentConfig& config, const CicsDataset& dataset) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dataset.entries.size(); ++i) {
    const auto& e = dataset.entries[i];
    const bool by_index = config.entries.empty() ||
                          std::find(config.entries.begin(), config.entries.end(), e.index) != config.entries.end();
    const bool by_label = config.labels.empty() ||
                          std::find(config.labels.begin(), config.labels.end(), e.label) != config.labels.end();
    if (by_index && by_label) out.push_back(i);
  }
  for (int i : config.entries) {
    if (i < 1 || static_cast<std::size_t>(i) > dataset.entries.size()) {
      throw ConfigError("entry " + std::to_string(i) + " is not in dataset " + to_string(dataset.id));
    }
  }
  return out;
}

std::size_t ExperimentResult::failures() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.ok; }));
}

std::optional<double> ExperimentResult::gate_delta() const {
  std::optional<double> worst;
  for (const auto& e : entries) {
    if (e.gate_s_max && e.s_max) worst = std::max(worst.value_or(0.0), std::abs(*e.gate_s_max - *e.s_max));
  }
  return worst;
}

bool ExperimentResult::gate_passed() const {
  const auto d = gate_delta();
  return d && *d < config.quantum.gate_tolerance;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = Clock::now();
  ExperimentResult res;
  res.config = config;
  res.dataset = resolve_dataset(config);
  const auto positions = selected_entries(config, res.dataset);

  const auto dataset_dir = config.outdir / to_string(res.dataset.id);
  std::filesystem::create_directories(dataset_dir);
  res.summary_path = config.outdir / "summary.csv";
  res.manifest_path = config.outdir / "manifest.json";

  res.entries.resize(positions.size());
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const auto& e = res.dataset.entries[positions[k]];
    EntryResult& r = res.entries[k];
    r.index = e.index;
    r.label = e.label;
    r.point = {e.q1, e.p1, e.q2, 0.0};
    r.energy = res.dataset.energy;
    try {
      r.point = res.dataset.point(positions[k]);
    } catch (const Error& ex) {
      r.ok = false;
      r.error = ex.what();
    }
  }

  Context ctx{config, res.dataset, dataset_dir, nullptr, std::nullopt};

  std::optional<EigenSystem> eigensystem;
  if (needs_quantum(config)) {
    std::vector<PhasePoint> centres;
    for (const auto& r : res.entries) {
      if (r.ok) centres.push_back(r.point);
    }
    if (!centres.empty()) {
      res.truncation = config.quantum.truncation
                           ? *config.quantum.truncation
                           : minimal_truncation(res.dataset.model, centres, config.quantum.leakage_threshold);
      ctx.truncation = res.truncation;
      eigensystem.emplace(build_eigensystem(res.dataset, *res.truncation, config.quantum, "main", res.eigensystems));
      ctx.eigensystem = &*eigensystem;
    }
  }

  parallel_for(res.entries.size(), config.workers, [&](std::size_t k) {
    EntryResult& r = res.entries[k];
    if (!r.ok) return;
    const auto t0 = Clock::now();
    try {
      run_classical(ctx, r);
      if (ctx.eigensystem) run_quantum(ctx, r);
    } catch (const std::exception& ex) {
      r.ok = false;
      r.error = ex.what();
    }
    r.seconds = seconds_since(t0);
  });

  if (eigensystem && wants(config, Stage::EntropyCurve) && config.quantum.gate_extra > 0) {
    eigensystem.reset();
    const BasisTruncation larger = enlarged(*res.truncation, config.quantum.gate_extra);
    const EigenSystem gate = build_eigensystem(res.dataset, larger, config.quantum, "gate", res.eigensystems);
    parallel_for(res.entries.size(), config.workers, [&](std::size_t k) {
      EntryResult& r = res.entries[k];
      if (!r.ok || !r.window_t_max) return;
      try {
        const QuantumState psi = initial_coherent_state(res.dataset.model, r.point, larger, config.quantum.leakage_threshold);
        r.gate_s_max = entropy_curve(gate, psi, *r.window_t_max, config.quantum.dt_sample, config.quantum.subsystem).s_max;
      } catch (const std::exception& ex) {
        r.ok = false;
        r.error = std::string("convergence gate: ") + ex.what();
      }
    });
  }

  write_summary(res);
  write_manifest(res, seconds_since(start));
  return res;
}

}  // namespace qcc
