#pragma once

// Quantized models over truncated product bases.
//
// Both subsystems are labelled so that subsystem A pairs with (q1, p1) and
// subsystem B with (q2, p2):
//   Pullen-Edmonds:  A = oscillator 1 (Fock n1),  B = oscillator 2 (Fock n2)
//   Jaynes-Cummings: A = atoms (k = m + J, k = 0..2J), B = field (Fock n)

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "qcc/models.hpp"

namespace qcc {

using cplx = std::complex<double>;

inline constexpr double kDefaultLeakageThreshold = 1e-6;
inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{3} << 30;

struct BasisTruncation {
  int n1_max = 0;                // PE: Fock cutoff of oscillator 1
  int n2_max = 0;                // PE: Fock cutoff of oscillator 2
  int n_ph_max = 0;              // JC: photon cutoff; the atomic space is always complete
  std::optional<int> shell_max;  // PE: optional cap n1 + n2 <= shell_max

  static BasisTruncation pullen_edmonds(int n1_max, int n2_max,
                                        std::optional<int> shell_max = std::nullopt);
  /// Energy-shell truncation n1 + n2 <= shell with per-mode cutoffs equal to it.
  static BasisTruncation pullen_edmonds_shell(int shell_max);
  static BasisTruncation jaynes_cummings(int n_ph_max);
};

struct BasisLabel {
  int a = 0;
  int b = 0;
  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

/// Subset of the product basis {0..dim_a-1} x {0..dim_b-1}, optionally capped
/// by a + b <= shell_max. Labels are stored in row-major (a, b) order.
class ProductBasis {
 public:
  ProductBasis(int dim_a, int dim_b, std::optional<int> shell_max = std::nullopt,
               bool a_truncated = true, bool b_truncated = true);

  static ProductBasis for_model(const ModelSpec& model, const BasisTruncation& trunc);

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  std::optional<int> shell_max() const { return shell_max_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(labels_.size()); }
  const std::vector<BasisLabel>& labels() const { return labels_; }
  const BasisLabel& label(Eigen::Index i) const { return labels_[static_cast<std::size_t>(i)]; }

  /// Position of (a, b) in the basis, or -1 when the label is excluded.
  Eigen::Index index_of(int a, int b) const;

  /// True when the label lies in the outermost two shells of a truncated index.
  bool on_boundary(Eigen::Index i) const;

 private:
  int dim_a_;
  int dim_b_;
  std::optional<int> shell_max_;
  bool a_truncated_;
  bool b_truncated_;
  std::vector<BasisLabel> labels_;
  std::vector<Eigen::Index> lookup_;  // dense dim_a x dim_b table
};

/// Normalized amplitude vector over a product basis.
struct QuantumState {
  std::shared_ptr<const ProductBasis> basis;
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }
  /// Amplitudes scattered into a dim_a x dim_b matrix (zeros outside the basis).
  Eigen::MatrixXcd as_matrix() const;
};

/// Real-symmetric block of a Hamiltonian. `members` are basis indices.
struct OperatorBlock {
  std::vector<Eigen::Index> members;
  Eigen::MatrixXd matrix;
};

/// Hermitian operator stored as real-symmetric diagonal blocks over a
/// product basis. Both model Hamiltonians have real matrix elements in the
/// Fock and |J, m> bases, and the blocks follow their conserved parities.
class HermitianOperator {
 public:
  HermitianOperator(std::shared_ptr<const ProductBasis> basis, std::vector<OperatorBlock> blocks);

  /// Single-block operator over a generic dim x 1 basis.
  static HermitianOperator from_dense(const Eigen::MatrixXd& matrix);

  const std::shared_ptr<const ProductBasis>& basis() const { return basis_; }
  const std::vector<OperatorBlock>& blocks() const { return blocks_; }
  /// Moves the block storage out, leaving the operator empty.
  std::vector<OperatorBlock> take_blocks() && { return std::move(blocks_); }
  Eigen::Index dimension() const { return basis_->size(); }

  /// Largest |H_ij - H_ji| over all blocks.
  double max_asymmetry() const;
  Eigen::MatrixXd to_dense() const;
  /// H |psi>
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;

 private:
  std::shared_ptr<const ProductBasis> basis_;
  std::vector<OperatorBlock> blocks_;
};

/// Matrix of the quantized Hamiltonian (hbar = 1; PE coordinates measured in
/// sqrt(hbar/m w)). Throws ResourceError when the blocks plus one block's
/// eigensolver workspace would exceed `memory_budget` bytes.
HermitianOperator build_hamiltonian(const ModelSpec& model, const BasisTruncation& trunc,
                                    std::size_t memory_budget = kDefaultMemoryBudget);

/// Probability carried by the outermost two shells of the truncated basis.
double boundary_leakage(const QuantumState& state);

/// Coherent state centred on `x`: |alpha1> (x) |alpha2> for PE, |w> (x) |v> for JC.
/// Throws TruncationError when the untruncated state puts more than
/// `leakage_threshold` of its probability in the outermost two shells.
QuantumState initial_coherent_state(const ModelSpec& model, const PhasePoint& x,
                                    const BasisTruncation& trunc,
                                    double leakage_threshold = kDefaultLeakageThreshold);

/// Smallest truncation whose coherent states at all `centres` pass the leakage
/// criterion. PE: shell truncation; JC: photon cutoff.
BasisTruncation minimal_truncation(const ModelSpec& model, const std::vector<PhasePoint>& centres,
                                   double leakage_threshold = kDefaultLeakageThreshold);

/// Larger truncation used by the convergence gate (every cutoff + `extra`).
BasisTruncation enlarged(const BasisTruncation& trunc, int extra);

}  // namespace qcc
