#pragma once

// CSV artifacts: header row, ',' separator, '.' decimal point, LF line
// endings, doubles with 17 significant digits.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qcc/classical.hpp"
#include "qcc/quantum.hpp"
#include "qcc/spectral.hpp"

namespace qcc::io {

std::string format_double(double value);

/// Minimal CSV reader for unquoted data (the bundled CICS resource).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text);

/// Writes `rows` below `header`; every row must have header.size() cells.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// `t,q1,p1,q2,p2`, every `output_stride`-th sample.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, int output_stride = 1);
/// `t_cross,q1,p1`
void write_section_csv(const std::filesystem::path& path, const SectionPoints& section);
/// `omega,intensity`, bins with omega <= max_omega.
void write_spectrum_csv(const std::filesystem::path& path, const PowerSpectrum& spectrum,
                        double max_omega = 1e300);
/// `observable,omega,weight`
void write_lines_csv(const std::filesystem::path& path, const SpectralLines& lines);
/// `t,S_V`
void write_entropy_curve_csv(const std::filesystem::path& path, const EntropyCurve& curve);
/// `E_n,rho_nn`
void write_density_spectrum_csv(const std::filesystem::path& path, const DensitySpectrum& spectrum);

}  // namespace qcc::io
