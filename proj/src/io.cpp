#include "qcc/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qcc/errors.hpp"

namespace qcc::io {

namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw InputError("CSV has no column '" + std::string(name) + "'");
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    if (line.empty()) continue;
    auto cells = split(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
    } else {
      if (cells.size() != table.header.size()) {
        throw InputError("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                         std::to_string(table.header.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (table.header.empty()) throw InputError("CSV text is empty");
  return table;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  auto out = open_for_write(path);
  write_row(out, header);
  for (const auto& row : rows) {
    if (row.size() != header.size()) throw InputError("CSV row width does not match its header");
    write_row(out, row);
  }
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj, int output_stride) {
  if (output_stride < 1) throw InputError("output stride must be >= 1");
  auto out = open_for_write(path);
  out << "t,q1,p1,q2,p2\n";
  for (std::size_t k = 0; k < traj.samples.size(); k += static_cast<std::size_t>(output_stride)) {
    const auto& x = traj.samples[k];
    out << format_double(traj.time(k)) << ',' << format_double(x.q1) << ',' << format_double(x.p1) << ','
        << format_double(x.q2) << ',' << format_double(x.p2) << '\n';
  }
}

void write_section_csv(const std::filesystem::path& path, const SectionPoints& section) {
  auto out = open_for_write(path);
  out << "t_cross,q1,p1\n";
  for (std::size_t i = 0; i < section.points.size(); ++i) {
    out << format_double(section.crossing_times[i]) << ',' << format_double(section.points[i].first) << ','
        << format_double(section.points[i].second) << '\n';
  }
}

void write_spectrum_csv(const std::filesystem::path& path, const PowerSpectrum& spectrum, double max_omega) {
  auto out = open_for_write(path);
  out << "omega,intensity\n";
  for (std::size_t j = 0; j < spectrum.frequencies.size() && spectrum.frequencies[j] <= max_omega; ++j) {
    out << format_double(spectrum.frequencies[j]) << ',' << format_double(spectrum.intensities[j]) << '\n';
  }
}

void write_lines_csv(const std::filesystem::path& path, const SpectralLines& lines) {
  auto out = open_for_write(path);
  out << "observable,omega,weight\n";
  for (const auto& l : lines.q1) out << "q1," << format_double(l.omega) << ',' << format_double(l.weight) << '\n';
  for (const auto& l : lines.q2) out << "q2," << format_double(l.omega) << ',' << format_double(l.weight) << '\n';
}

void write_entropy_curve_csv(const std::filesystem::path& path, const EntropyCurve& curve) {
  auto out = open_for_write(path);
  out << "t,S_V\n";
  for (std::size_t k = 0; k < curve.times.size(); ++k) {
    out << format_double(curve.times[k]) << ',' << format_double(curve.values[k]) << '\n';
  }
}

void write_density_spectrum_csv(const std::filesystem::path& path, const DensitySpectrum& spectrum) {
  auto out = open_for_write(path);
  out << "E_n,rho_nn\n";
  for (const auto& line : spectrum.lines) {
    out << format_double(line.energy) << ',' << format_double(line.population) << '\n';
  }
}

}  // namespace qcc::io
