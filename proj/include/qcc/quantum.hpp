#pragma once

// Exact propagation of truncated Hamiltonians by full diagonalization, plus
// the entanglement diagnostics computed along the evolution.

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qcc/hilbert.hpp"

namespace qcc {

/// Eigenpairs of one parity block; `members` are basis indices.
struct EigenBlock {
  std::vector<Eigen::Index> members;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

class EigenSystem {
 public:
  EigenSystem(std::shared_ptr<const ProductBasis> basis, std::vector<EigenBlock> blocks);

  const std::shared_ptr<const ProductBasis>& basis() const { return basis_; }
  const std::vector<EigenBlock>& blocks() const { return blocks_; }
  Eigen::Index dimension() const { return basis_->size(); }

  /// All eigenvalues, ascending.
  const Eigen::VectorXd& eigenvalues() const { return sorted_values_; }
  /// The n-th eigenvector (ascending eigenvalue order) in the full basis.
  Eigen::VectorXd eigenvector(Eigen::Index n) const;
  /// Overlaps <n|psi> in ascending eigenvalue order.
  Eigen::VectorXcd project(const QuantumState& psi) const;

 private:
  std::shared_ptr<const ProductBasis> basis_;
  std::vector<EigenBlock> blocks_;
  Eigen::VectorXd sorted_values_;
  std::vector<std::pair<std::size_t, Eigen::Index>> order_;  // (block, column)
};

/// Throws InputError if any block is asymmetric beyond 1e-12 (relative to its
/// largest entry).
EigenSystem diagonalize(const HermitianOperator& H);
EigenSystem diagonalize(HermitianOperator&& H);

/// psi(t) = V exp(-i D t) V^dag psi0 for every t.
std::vector<QuantumState> evolve(const EigenSystem& es, const QuantumState& psi0,
                                 std::span<const double> times);

enum class Subsystem { Mode1, Mode2, Atom, Field };

std::string to_string(Subsystem s);
Subsystem subsystem_from_string(const std::string& name);

struct ReducedDensity {
  Eigen::MatrixXcd matrix;
  Subsystem subsystem = Subsystem::Mode1;
};

/// Partial trace over the complement of `subsystem`. Mode1/Atom keep the
/// A factor of the product basis, Mode2/Field keep B.
ReducedDensity reduced_density(const QuantumState& psi, Subsystem subsystem);

/// -sum lambda ln lambda (nats). Eigenvalues in [-1e-8, 0) are clamped to 0;
/// anything below -1e-8 raises InvalidDensityError.
double von_neumann_entropy(const ReducedDensity& rho);

struct EntropyCurve {
  std::vector<double> times;
  std::vector<double> values;
  double s_max = 0.0;
  double t_of_max = 0.0;
};

/// S_V at each of `times` (>= 0); t = 0 uses psi0 itself.
std::vector<double> entropy_values(const EigenSystem& es, const QuantumState& psi0,
                                   std::span<const double> times, Subsystem subsystem);

/// S_V(t) on the grid t_k = k dt_sample, 0 <= t_k <= t_max.
EntropyCurve entropy_curve(const EigenSystem& es, const QuantumState& psi0, double t_max,
                           double dt_sample, Subsystem subsystem);

struct DensityLine {
  double energy = 0.0;
  double population = 0.0;
};

struct DensitySpectrum {
  std::vector<DensityLine> lines;  // ascending energy, population >= floor
  double participation_ratio = 0.0;  // 1 / sum rho_nn^2 over all n
  double total_population = 0.0;     // sum over all n before flooring
};

inline constexpr double kDefaultDensityFloor = 1e-12;

/// rho_nn = |<n|psi0>|^2, which is constant under autonomous evolution.
DensitySpectrum density_spectrum(const EigenSystem& es, const QuantumState& psi0,
                                 double floor = kDefaultDensityFloor);

}  // namespace qcc
