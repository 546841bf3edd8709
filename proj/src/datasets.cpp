#include "qcc/datasets.hpp"

#include <charconv>
#include <cmath>

#include "qcc/errors.hpp"
#include "qcc/io.hpp"

namespace qcc {

namespace {

struct DatasetInfo {
  DatasetId id;
  const char* name;
};

constexpr DatasetInfo kDatasets[] = {
    {DatasetId::PeRegular, "pe-regular"},
    {DatasetId::PeMixed, "pe-mixed"},
    {DatasetId::JcRegular, "jc-regular"},
    {DatasetId::JcMixed, "jc-mixed"},
};

double parse_number(std::string_view text) {
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    return parse_number(text.substr(0, slash)) / parse_number(text.substr(slash + 1));
  }
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InputError("bad number '" + std::string(text) + "' in CICS resource");
  }
  return value;
}

// 10^-d for a value printed with d decimals.
double last_digit_unit(std::string_view text) {
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return 1.0;
  return std::pow(10.0, -static_cast<double>(text.size() - dot - 1));
}

bool feasible(const CicsDataset& d, const CicsEntry& e) {
  try {
    solve_p2(d.model, e.q1, e.p1, e.q2, d.energy);
    return true;
  } catch (const InfeasibleEnergyError&) {
    return false;
  }
}

CicsDataset skeleton(DatasetId id) {
  CicsDataset d;
  d.id = id;
  switch (id) {
    case DatasetId::PeRegular:
      d.model = ModelSpec::pullen_edmonds({1.0, 1.0, 0.0075});
      d.energy = 58.0;
      d.section_value = std::sqrt(10.0);
      break;
    case DatasetId::PeMixed:
      d.model = ModelSpec::pullen_edmonds({1.0, 1.0, 0.0075});
      d.energy = 150.75;
      d.section_value = std::sqrt(10.0) / 4.0;
      break;
    case DatasetId::JcRegular:
      d.model = ModelSpec::jaynes_cummings({1.0, 1.0, 0.25, 0.0, 29.0});
      d.energy = 40.0;
      d.section_value = 0.0;
      break;
    case DatasetId::JcMixed:
      d.model = ModelSpec::jaynes_cummings({1.0, 1.0, 0.4, 0.25, 25.0});
      d.energy = 35.0;
      d.section_value = 0.0;
      break;
  }
  return d;
}

}  // namespace

std::string to_string(DatasetId id) {
  for (const auto& info : kDatasets) {
    if (info.id == id) return info.name;
  }
  return "pe-regular";
}

DatasetId dataset_from_string(std::string_view name) {
  for (const auto& info : kDatasets) {
    if (name == info.name) return info.id;
  }
  throw LookupError("unknown dataset '" + std::string(name) + "'");
}

std::vector<DatasetId> all_datasets() {
  std::vector<DatasetId> ids;
  for (const auto& info : kDatasets) ids.push_back(info.id);
  return ids;
}

PhasePoint CicsDataset::point(std::size_t i) const {
  if (i >= entries.size()) throw LookupError("CICS index out of range");
  const CicsEntry& e = entries[i];
  return {e.q1, e.p1, e.q2, solve_p2(model, e.q1, e.p1, e.q2, energy)};
}

std::vector<PhasePoint> CicsDataset::points() const {
  std::vector<PhasePoint> out;
  out.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) out.push_back(point(i));
  return out;
}

std::vector<std::size_t> CicsDataset::with_label(std::string_view label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].label == label) out.push_back(i);
  }
  return out;
}

CicsDataset load_cics(DatasetId id) {
  const std::string name = to_string(id);
  const io::CsvTable table = io::parse_csv(bundled_cics_csv());
  const std::size_t c_set = table.column("dataset");
  const std::size_t c_label = table.column("label");
  const std::size_t c_q1 = table.column("q1");
  const std::size_t c_p1 = table.column("p1");
  const std::size_t c_q2 = table.column("q2");

  CicsDataset d = skeleton(id);
  const double scale = d.model.kind() == ModelKind::PullenEdmonds ? std::sqrt(10.0) : 1.0;
  for (const auto& row : table.rows) {
    if (row[c_set] != name) continue;
    CicsEntry e;
    e.label = row[c_label];
    e.q1 = scale * parse_number(row[c_q1]);
    e.p1 = scale * parse_number(row[c_p1]);
    e.q2 = scale * parse_number(row[c_q2]);
    bool repeated = false;
    for (const auto& prev : d.entries) {
      repeated = repeated || (prev.q1 == e.q1 && prev.p1 == e.p1 && prev.q2 == e.q2);
    }
    if (repeated) continue;
    if (!feasible(d, e)) {
      CicsEntry moved = e;
      const double unit = scale * last_digit_unit(row[c_p1]);
      moved.p1 -= std::copysign(unit, e.p1);
      if (feasible(d, moved)) {
        e = moved;
        e.adjusted = true;
      }
    }
    e.index = static_cast<int>(d.entries.size()) + 1;
    d.entries.push_back(std::move(e));
  }
  return d;
}

CicsDataset load_cics(std::string_view name) { return load_cics(dataset_from_string(name)); }

CicsDataset rescale_spin(const CicsDataset& dataset, double J_new) {
  if (dataset.model.kind() != ModelKind::JaynesCummings) {
    throw InputError("spin rescaling applies to Jaynes-Cummings datasets only");
  }
  JaynesCummingsParams params = dataset.model.jc();
  const double s = std::sqrt(J_new / params.J);
  params.J = J_new;
  CicsDataset out = dataset;
  out.model = ModelSpec::jaynes_cummings(params);
  out.energy = s * s * dataset.energy;
  out.section_value = s * dataset.section_value;
  for (auto& e : out.entries) {
    e.q1 *= s;
    e.p1 *= s;
    e.q2 *= s;
  }
  return out;
}

}  // namespace qcc
