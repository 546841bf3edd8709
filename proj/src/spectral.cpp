#include "qcc/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "qcc/errors.hpp"

namespace qcc {

namespace {

constexpr std::size_t kMinSeriesLength = 16;

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
    if (!ptr) throw ResourceError("fftw_malloc failed");
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  void* ptr;
};

// |X_j|^2 for j = 0..n/2 of the real input (length n).
std::vector<double> squared_dft(const std::vector<double>& input) {
  const std::size_t n = input.size();
  FftwBuffer in(sizeof(double) * n);
  FftwBuffer out(sizeof(fftw_complex) * (n / 2 + 1));
  auto* in_data = static_cast<double*>(in.ptr);
  auto* out_data = static_cast<fftw_complex*>(out.ptr);

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_data, out_data, FFTW_ESTIMATE);
  }
  std::copy(input.begin(), input.end(), in_data);
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  std::vector<double> power(n / 2 + 1);
  for (std::size_t j = 0; j < power.size(); ++j) {
    power[j] = out_data[j][0] * out_data[j][0] + out_data[j][1] * out_data[j][1];
  }
  return power;
}

bool is_strict_peak(const std::vector<double>& v, std::size_t j) {
  const bool above_left = j == 0 || v[j] > v[j - 1];
  const bool above_right = j + 1 == v.size() || v[j] > v[j + 1];
  return above_left && above_right;
}

// Upper envelope of the window's amplitude response |W(x)| / |W(0)| at an
// offset of x resolution bins (bins of width 2 pi / record duration).
double leakage_envelope(Window window, double x) {
  x = std::abs(x);
  if (window == Window::Hann) {
    if (x < 1.5) return 1.0;
    return 1.0 / (std::numbers::pi * x * (x * x - 1.0));
  }
  if (x < 1.0) return 1.0;
  return 1.0 / (std::numbers::pi * x);
}

constexpr double kLeakageMargin = 2.0;

struct Peak {
  std::size_t bin;
  double omega;
  double weight;
};

std::vector<SpectralLine> lines_of(const PowerSpectrum& s, double threshold) {
  const auto& I = s.intensities;
  std::vector<Peak> peaks;
  for (std::size_t j = 0; j < I.size(); ++j) {
    if (I[j] < threshold || !(I[j] > 0.0) || !is_strict_peak(I, j)) continue;

    double offset = 0.0;
    if (j > 0 && j + 1 < I.size()) {
      const double denom = I[j - 1] - 2.0 * I[j] + I[j + 1];
      if (denom != 0.0) offset = std::clamp(0.5 * (I[j - 1] - I[j + 1]) / denom, -0.5, 0.5);
    }
    const std::size_t lo = j >= kLineHalfWidth ? j - kLineHalfWidth : 0;
    const std::size_t hi = std::min(I.size() - 1, j + kLineHalfWidth);
    double weight = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) weight += I[i] * s.spacing;
    peaks.push_back({j, (static_cast<double>(j) + offset) * s.spacing, weight});
  }

  std::stable_sort(peaks.begin(), peaks.end(), [&](const Peak& a, const Peak& b) { return I[a.bin] > I[b.bin]; });
  const double bins_per_omega = s.record_duration / (2.0 * std::numbers::pi);
  std::vector<Peak> kept;
  for (const Peak& p : peaks) {
    double leak = 0.0;
    for (const Peak& k : kept) {
      leak += std::sqrt(I[k.bin]) * leakage_envelope(s.window, (p.omega - k.omega) * bins_per_omega);
    }
    if (std::sqrt(I[p.bin]) > kLeakageMargin * leak) kept.push_back(p);
  }
  std::sort(kept.begin(), kept.end(), [](const Peak& a, const Peak& b) { return a.bin < b.bin; });

  std::vector<SpectralLine> lines;
  for (const Peak& p : kept) {
    if (!lines.empty() && p.omega <= lines.back().omega) {
      // adjacent peaks interpolated onto the same frequency
      lines.back().weight += p.weight;
      continue;
    }
    lines.push_back({p.omega, p.weight});
  }
  return lines;
}

double shannon(const std::vector<double>& weights, double total) {
  double s = 0.0;
  for (double w : weights) {
    const double p = w / total;
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

}  // namespace

std::string to_string(Window w) { return w == Window::Hann ? "hann" : "none"; }

Window window_from_string(const std::string& name) {
  if (name == "hann") return Window::Hann;
  if (name == "none" || name == "rectangular") return Window::None;
  throw InputError("unknown window '" + name + "'");
}

std::string to_string(EntropyMode m) { return m == EntropyMode::Discrete ? "discrete" : "continuous"; }

double PowerSpectrum::total_weight() const {
  double sum = 0.0;
  for (double v : intensities) sum += v;
  return sum * spacing;
}

PowerSpectrum power_spectrum(std::span<const double> series, double dt_sample, Window window,
                             Observable observable) {
  if (series.size() < kMinSeriesLength) {
    throw InputError("power spectrum needs at least 16 samples");
  }
  if (!(dt_sample > 0.0) || !std::isfinite(dt_sample)) {
    throw InputError("sample interval must be positive");
  }
  const std::size_t n0 = series.size();
  const std::size_t n = std::bit_ceil(n0);

  std::vector<double> windowed(n, 0.0);
  double window_power = 0.0;
  for (std::size_t k = 0; k < n0; ++k) {
    double w = 1.0;
    if (window == Window::Hann) {
      w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n0)));
    }
    windowed[k] = series[k] * w;
    window_power += w * w;
  }
  window_power /= static_cast<double>(n0);

  const std::vector<double> power = squared_dft(windowed);

  PowerSpectrum out;
  out.observable = observable;
  out.window = window;
  out.duration = static_cast<double>(n) * dt_sample;
  out.spacing = 2.0 * std::numbers::pi / out.duration;
  out.record_duration = static_cast<double>(n0) * dt_sample;
  out.frequencies.resize(power.size());
  out.intensities.resize(power.size());
  const double norm = static_cast<double>(n) * static_cast<double>(n0) * window_power;
  for (std::size_t j = 0; j < power.size(); ++j) {
    const double fold = (j == 0 || j == n / 2) ? 1.0 : 2.0;
    out.frequencies[j] = static_cast<double>(j) * out.spacing;
    out.intensities[j] = fold * power[j] / norm / out.spacing;
  }
  return out;
}

SpectralLines extract_lines(const PowerSpectrum& q1, const PowerSpectrum& q2, double rel_threshold) {
  if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
    throw InputError("relative line threshold must lie in (0, 1)");
  }
  double global_max = 0.0;
  for (const auto* s : {&q1, &q2}) {
    for (double v : s->intensities) global_max = std::max(global_max, v);
  }
  if (!(global_max > 0.0)) throw EmptyLinesError("spectra are identically zero");

  const double threshold = rel_threshold * global_max;
  SpectralLines lines{lines_of(q1, threshold), lines_of(q2, threshold)};
  if (lines.total() == 0) throw EmptyLinesError("no spectral line above the threshold");
  return lines;
}

FrequencyEntropyResult frequency_entropy(const SpectralLines& lines) {
  if (lines.total() == 0) throw InputError("frequency entropy needs at least one line");
  std::vector<double> weights;
  weights.reserve(lines.total());
  double total = 0.0;
  for (const auto* group : {&lines.q1, &lines.q2}) {
    for (const auto& l : *group) {
      if (!(l.weight > 0.0)) throw InputError("spectral line weights must be positive");
      weights.push_back(l.weight);
      total += l.weight;
    }
  }
  return {shannon(weights, total), EntropyMode::Discrete, weights.size()};
}

FrequencyEntropyResult frequency_entropy_continuous(const PowerSpectrum& q1, const PowerSpectrum& q2) {
  if (q1.intensities.size() != q2.intensities.size() ||
      std::abs(q1.spacing - q2.spacing) > 1e-12 * std::max(q1.spacing, q2.spacing)) {
    throw InputError("continuous frequency entropy needs both spectra on a common grid");
  }
  std::vector<double> weights;
  weights.reserve(2 * q1.intensities.size());
  double total = 0.0;
  for (const auto* s : {&q1, &q2}) {
    for (double v : s->intensities) {
      if (v > 0.0) {
        weights.push_back(v);
        total += v;
      }
    }
  }
  if (!(total > 0.0)) throw InputError("spectra are identically zero");
  return {shannon(weights, total), EntropyMode::Continuous, weights.size()};
}

}  // namespace qcc
