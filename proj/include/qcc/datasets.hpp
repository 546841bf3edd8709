#pragma once

// Bundled CICS datasets: the initial-state centres used by the experiments,
// with the model parameters and energy shell each set was drawn from.

#include <string>
#include <string_view>
#include <vector>

#include "qcc/models.hpp"

namespace qcc {

enum class DatasetId { PeRegular, PeMixed, JcRegular, JcMixed };

std::string to_string(DatasetId id);
/// Throws LookupError for an unknown name.
DatasetId dataset_from_string(std::string_view name);
std::vector<DatasetId> all_datasets();

struct CicsEntry {
  int index = 0;  // 1-based position within the dataset
  std::string label;
  double q1 = 0.0;
  double p1 = 0.0;
  double q2 = 0.0;
  // Set when the tabulated p1 put the point just outside the energy shell and
  // it was moved inward by one unit of its last printed digit.
  bool adjusted = false;
};

struct CicsDataset {
  DatasetId id = DatasetId::PeRegular;
  ModelSpec model = ModelSpec::pullen_edmonds();
  double energy = 0.0;
  double section_value = 0.0;  // q2 on the surface of section
  std::vector<CicsEntry> entries;

  /// Full phase point of entry i (0-based) with p2 > 0 fixed by the energy.
  PhasePoint point(std::size_t i) const;
  std::vector<PhasePoint> points() const;
  /// Entries whose label equals `label`, in dataset order (0-based positions).
  std::vector<std::size_t> with_label(std::string_view label) const;
};

/// Raw text of the bundled resource (`dataset,row,label,q1,p1,q2`, scaled form).
std::string_view bundled_cics_csv();

/// Entries are unscaled on load (PE tables list coordinates over sqrt(10)).
/// Rows repeating an earlier point are dropped; the first occurrence keeps
/// its label. A row whose p1 lies outside the energy shell by less than one
/// unit of its last printed digit is moved inward by that unit (`adjusted`).
CicsDataset load_cics(DatasetId id);
CicsDataset load_cics(std::string_view name);

/// JC dataset mapped to spin `J_new`: coordinates scale by s = sqrt(J_new/J),
/// the energy by s^2. The classical orbits map onto each other exactly.
CicsDataset rescale_spin(const CicsDataset& dataset, double J_new);

}  // namespace qcc
