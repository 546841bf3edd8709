#pragma once

// Power spectra of trajectory observables, spectral-line extraction, and
// the frequency entropy of the resulting line (or bin) distribution.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qcc/classical.hpp"

namespace qcc {

enum class Window { None, Hann };

std::string to_string(Window w);
Window window_from_string(const std::string& name);

inline constexpr double kDefaultLineThreshold = 1e-6;
inline constexpr int kLineHalfWidth = 2;

/// One-sided periodogram on the grid omega_j = j * 2 pi / T, j = 0..N/2.
///
/// intensities[j] estimates (1 / 2 pi T) |int x(t) e^{-i omega t} dt|^2 with the
/// +-omega pair folded onto omega >= 0 and the window's power normalized out,
/// so intensities[j] * spacing is the share of the mean-square signal in bin j.
/// A pure A cos(omega0 t) on the grid carries weight A^2/2.
struct PowerSpectrum {
  Observable observable = Observable::Q1;
  std::vector<double> frequencies;
  std::vector<double> intensities;
  double duration = 0.0;         // T = N dt after padding
  double record_duration = 0.0;  // N0 dt of the unpadded input
  double spacing = 0.0;   // 2 pi / T
  Window window = Window::Hann;

  double bin_weight(std::size_t j) const { return intensities[j] * spacing; }
  double total_weight() const;
};

/// Input shorter than 16 samples raises InputError; other lengths are
/// zero-padded to the next power of two.
PowerSpectrum power_spectrum(std::span<const double> series, double dt_sample, Window window,
                             Observable observable = Observable::Q1);

struct SpectralLine {
  double omega = 0.0;
  double weight = 0.0;
};

struct SpectralLines {
  std::vector<SpectralLine> q1;
  std::vector<SpectralLine> q2;

  std::size_t total() const { return q1.size() + q2.size(); }
};

/// Strict local maxima at or above rel_threshold * (global max over both
/// spectra). Frequency by parabolic interpolation through the peak and its
/// neighbours; weight summed over the peak bin +- 2.
///
/// Peaks are visited strongest first, and a peak whose amplitude is within a
/// factor 2 of the summed window-leakage envelope of the lines already kept
/// in the same spectrum is treated as leakage rather than as a line.
SpectralLines extract_lines(const PowerSpectrum& q1, const PowerSpectrum& q2,
                            double rel_threshold = kDefaultLineThreshold);

enum class EntropyMode { Discrete, Continuous };

std::string to_string(EntropyMode m);

struct FrequencyEntropyResult {
  double value = 0.0;  // nats
  EntropyMode mode = EntropyMode::Discrete;
  std::size_t count = 0;  // lines (discrete) or non-empty bins (continuous)
};

/// Shannon entropy of the line weights normalized jointly over both observables.
FrequencyEntropyResult frequency_entropy(const SpectralLines& lines);

/// Same functional over the raw bins of two spectra on a common grid. The
/// value depends on the grid spacing (about +ln 2 per halving of the bin
/// width for smooth spectra), so `count` is reported with it.
FrequencyEntropyResult frequency_entropy_continuous(const PowerSpectrum& q1, const PowerSpectrum& q2);

}  // namespace qcc
