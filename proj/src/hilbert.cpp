#include "qcc/hilbert.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qcc/errors.hpp"

namespace qcc {

namespace {

int twice_spin(const ModelSpec& model) { return static_cast<int>(std::lround(2.0 * model.jc().J)); }

// ln C(n, k)
double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Fock coefficients e^{-|z|^2/2} z^n / sqrt(n!) for n = 0..count-1.
Eigen::VectorXcd fock_coherent(cplx z, int count) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(count);
  const double r = std::abs(z);
  if (r == 0.0) {
    c[0] = 1.0;
    return c;
  }
  const double log_r = std::log(r);
  const double phase = std::arg(z);
  for (int n = 0; n < count; ++n) {
    const double log_mag = -0.5 * r * r + n * log_r - 0.5 * std::lgamma(n + 1.0);
    c[n] = std::polar(std::exp(log_mag), n * phase);
  }
  return c;
}

// Atomic coherent state (1 + |w|^2)^{-J} e^{w J+} |J, -J> over k = m + J.
Eigen::VectorXcd atomic_coherent(cplx w, int two_j) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(two_j + 1);
  const double r = std::abs(w);
  if (r == 0.0) {
    c[0] = 1.0;
    return c;
  }
  const double log_r = std::log(r);
  const double phase = std::arg(w);
  const double log_norm = -0.5 * two_j * std::log1p(r * r);
  for (int k = 0; k <= two_j; ++k) {
    const double log_mag = log_norm + k * log_r + 0.5 * log_binomial(two_j, k);
    c[k] = std::polar(std::exp(log_mag), k * phase);
  }
  return c;
}

// <n'| Q^2 |n> with Q = (a + a^dag)/sqrt(2), exact (not a product of truncated Q).
double q_squared(int n_row, int n_col) {
  if (n_row == n_col) return n_col + 0.5;
  const int lo = std::min(n_row, n_col);
  if (std::abs(n_row - n_col) == 2) return 0.5 * std::sqrt((lo + 1.0) * (lo + 2.0));
  return 0.0;
}

void validate(const ModelSpec& model, const BasisTruncation& trunc) {
  if (model.kind() == ModelKind::PullenEdmonds) {
    if (trunc.n1_max < 0 || trunc.n2_max < 0 || (trunc.shell_max && *trunc.shell_max < 0)) {
      throw InputError("Fock cutoffs must be non-negative");
    }
  } else {
    if (trunc.n_ph_max < 0) throw InputError("photon cutoff must be non-negative");
    if (trunc.shell_max) throw InputError("shell truncation applies to Pullen-Edmonds only");
  }
}

// Log of the Poisson pmf.
double log_poisson(double mean, int k) {
  if (mean == 0.0) return k == 0 ? 0.0 : -INFINITY;
  return -mean + k * std::log(mean) - std::lgamma(k + 1.0);
}

// P(N >= k) for N ~ Poisson(mean), summed from the far tail inwards.
double poisson_upper_tail(double mean, int k) {
  if (k <= 0) return 1.0;
  double below = 0.0;
  for (int j = 0; j < k; ++j) below += std::exp(log_poisson(mean, j));
  return std::max(0.0, 1.0 - below);
}

cplx pe_alpha(const PullenEdmondsParams& p, double q, double mom) {
  const double scale = std::sqrt(p.m * p.omega);
  return cplx(scale * q, mom / scale) / std::sqrt(2.0);
}

}  // namespace

BasisTruncation BasisTruncation::pullen_edmonds(int n1_max, int n2_max, std::optional<int> shell_max) {
  BasisTruncation t;
  t.n1_max = n1_max;
  t.n2_max = n2_max;
  t.shell_max = shell_max;
  return t;
}

BasisTruncation BasisTruncation::pullen_edmonds_shell(int shell_max) {
  return pullen_edmonds(shell_max, shell_max, shell_max);
}

BasisTruncation BasisTruncation::jaynes_cummings(int n_ph_max) {
  BasisTruncation t;
  t.n_ph_max = n_ph_max;
  return t;
}

ProductBasis::ProductBasis(int dim_a, int dim_b, std::optional<int> shell_max, bool a_truncated,
                           bool b_truncated)
    : dim_a_(dim_a),
      dim_b_(dim_b),
      shell_max_(shell_max),
      a_truncated_(a_truncated),
      b_truncated_(b_truncated) {
  if (dim_a < 1 || dim_b < 1) throw InputError("product basis dimensions must be >= 1");
  lookup_.assign(static_cast<std::size_t>(dim_a) * static_cast<std::size_t>(dim_b), -1);
  for (int a = 0; a < dim_a; ++a) {
    for (int b = 0; b < dim_b; ++b) {
      if (shell_max_ && a + b > *shell_max_) continue;
      lookup_[static_cast<std::size_t>(a) * dim_b + b] = static_cast<Eigen::Index>(labels_.size());
      labels_.push_back({a, b});
    }
  }
}

ProductBasis ProductBasis::for_model(const ModelSpec& model, const BasisTruncation& trunc) {
  validate(model, trunc);
  if (model.kind() == ModelKind::PullenEdmonds) {
    return ProductBasis(trunc.n1_max + 1, trunc.n2_max + 1, trunc.shell_max);
  }
  return ProductBasis(twice_spin(model) + 1, trunc.n_ph_max + 1, std::nullopt, false, true);
}

Eigen::Index ProductBasis::index_of(int a, int b) const {
  if (a < 0 || b < 0 || a >= dim_a_ || b >= dim_b_) return -1;
  return lookup_[static_cast<std::size_t>(a) * dim_b_ + b];
}

bool ProductBasis::on_boundary(Eigen::Index i) const {
  const BasisLabel& l = label(i);
  if (a_truncated_ && l.a >= dim_a_ - 2) return true;
  if (b_truncated_ && l.b >= dim_b_ - 2) return true;
  if (shell_max_ && l.a + l.b >= *shell_max_ - 1) return true;
  return false;
}

Eigen::MatrixXcd QuantumState::as_matrix() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis->dim_a(), basis->dim_b());
  for (Eigen::Index i = 0; i < basis->size(); ++i) {
    const BasisLabel& l = basis->label(i);
    m(l.a, l.b) = amplitudes[i];
  }
  return m;
}

HermitianOperator::HermitianOperator(std::shared_ptr<const ProductBasis> basis,
                                     std::vector<OperatorBlock> blocks)
    : basis_(std::move(basis)), blocks_(std::move(blocks)) {
  Eigen::Index covered = 0;
  for (const auto& block : blocks_) {
    const auto n = static_cast<Eigen::Index>(block.members.size());
    if (block.matrix.rows() != n || block.matrix.cols() != n) {
      throw InputError("operator block matrix does not match its member count");
    }
    covered += n;
  }
  if (covered != basis_->size()) throw InputError("operator blocks do not partition the basis");
}

HermitianOperator HermitianOperator::from_dense(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
    throw InputError("dense operator must be square and non-empty");
  }
  auto basis = std::make_shared<const ProductBasis>(static_cast<int>(matrix.rows()), 1,
                                                    std::nullopt, false, false);
  OperatorBlock block;
  block.members.resize(static_cast<std::size_t>(matrix.rows()));
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) block.members[static_cast<std::size_t>(i)] = i;
  block.matrix = matrix;
  return HermitianOperator(std::move(basis), {std::move(block)});
}

double HermitianOperator::max_asymmetry() const {
  double worst = 0.0;
  for (const auto& block : blocks_) {
    if (block.matrix.size() == 0) continue;
    worst = std::max(worst, (block.matrix - block.matrix.transpose()).cwiseAbs().maxCoeff());
  }
  return worst;
}

Eigen::MatrixXd HermitianOperator::to_dense() const {
  const Eigen::Index n = dimension();
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
  for (const auto& block : blocks_) {
    for (std::size_t i = 0; i < block.members.size(); ++i) {
      for (std::size_t j = 0; j < block.members.size(); ++j) {
        dense(block.members[i], block.members[j]) =
            block.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return dense;
}

Eigen::VectorXcd HermitianOperator::apply(const Eigen::VectorXcd& psi) const {
  if (psi.size() != dimension()) throw InputError("state dimension does not match the operator");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (const auto& block : blocks_) {
    const auto n = static_cast<Eigen::Index>(block.members.size());
    Eigen::VectorXcd local(n);
    for (Eigen::Index i = 0; i < n; ++i) local[i] = psi[block.members[static_cast<std::size_t>(i)]];
    const Eigen::VectorXcd image = block.matrix.cast<cplx>() * local;
    for (Eigen::Index i = 0; i < n; ++i) out[block.members[static_cast<std::size_t>(i)]] = image[i];
  }
  return out;
}

HermitianOperator build_hamiltonian(const ModelSpec& model, const BasisTruncation& trunc,
                                    std::size_t memory_budget) {
  const auto basis = std::make_shared<const ProductBasis>(ProductBasis::for_model(model, trunc));
  const bool pe = model.kind() == ModelKind::PullenEdmonds;

  // Conserved parities: PE keeps (n1 mod 2, n2 mod 2); JC keeps (k + n) mod 2.
  const int block_count = pe ? 4 : 2;
  auto block_of = [pe](const BasisLabel& l) { return pe ? 2 * (l.a % 2) + (l.b % 2) : (l.a + l.b) % 2; };

  std::vector<OperatorBlock> blocks(static_cast<std::size_t>(block_count));
  std::vector<Eigen::Index> local(static_cast<std::size_t>(basis->size()));
  for (Eigen::Index i = 0; i < basis->size(); ++i) {
    auto& members = blocks[static_cast<std::size_t>(block_of(basis->label(i)))].members;
    local[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(members.size());
    members.push_back(i);
  }
  std::erase_if(blocks, [](const OperatorBlock& b) { return b.members.empty(); });

  // All blocks stay resident (their eigenvectors replace them in place); the
  // divide-and-conquer workspace of ~2 n^2 is needed for one block at a time.
  double bytes = 0.0;
  double largest = 0.0;
  for (const auto& block : blocks) {
    const double n = static_cast<double>(block.members.size());
    bytes += n * n * sizeof(double);
    largest = std::max(largest, n * n * sizeof(double));
  }
  bytes += 2.0 * largest;
  if (bytes > static_cast<double>(memory_budget)) {
    std::ostringstream msg;
    msg << "Hamiltonian of dimension " << basis->size() << " needs ~" << bytes / (1 << 20)
        << " MiB, above the budget of " << memory_budget / (1 << 20) << " MiB";
    throw ResourceError(msg.str());
  }
  for (auto& block : blocks) {
    const auto n = static_cast<Eigen::Index>(block.members.size());
    block.matrix = Eigen::MatrixXd::Zero(n, n);
  }

  auto block_index = [&](const BasisLabel& l) { return static_cast<std::size_t>(block_of(l)); };
  // blocks were compacted, so map parity keys onto surviving positions
  std::array<int, 4> slot{-1, -1, -1, -1};
  for (std::size_t s = 0; s < blocks.size(); ++s) {
    slot[block_index(basis->label(blocks[s].members.front()))] = static_cast<int>(s);
  }

  if (pe) {
    const auto& p = model.pe();
    const double g = p.lambda / ((p.m * p.omega) * (p.m * p.omega));
    for (Eigen::Index i = 0; i < basis->size(); ++i) {
      const BasisLabel& l = basis->label(i);
      auto& m = blocks[static_cast<std::size_t>(slot[block_index(l)])].matrix;
      const Eigen::Index row = local[static_cast<std::size_t>(i)];
      m(row, row) += p.omega * (l.a + l.b + 1.0);
      if (g == 0.0) continue;
      for (int da = -2; da <= 2; da += 2) {
        for (int db = -2; db <= 2; db += 2) {
          const Eigen::Index j = basis->index_of(l.a + da, l.b + db);
          if (j < 0) continue;
          const double v = g * q_squared(l.a + da, l.a) * q_squared(l.b + db, l.b);
          m(local[static_cast<std::size_t>(j)], row) += v;
        }
      }
    }
  } else {
    const auto& p = model.jc();
    const int two_j = twice_spin(model);
    const double scale = 1.0 / std::sqrt(2.0 * p.J);
    for (Eigen::Index i = 0; i < basis->size(); ++i) {
      const BasisLabel& l = basis->label(i);  // a = k = m + J, b = n
      auto& m = blocks[static_cast<std::size_t>(slot[block_index(l)])].matrix;
      const Eigen::Index row = local[static_cast<std::size_t>(i)];
      m(row, row) += p.omega * l.b + p.epsilon * (l.a - p.J);
      if (l.a >= two_j) continue;
      const double raise = std::sqrt((l.a + 1.0) * (two_j - l.a));  // <k+1|J+|k>
      const auto couple = [&](int b_to, double v) {
        const Eigen::Index j = basis->index_of(l.a + 1, b_to);
        if (j < 0 || v == 0.0) return;
        const Eigen::Index col = local[static_cast<std::size_t>(j)];
        m(col, row) += v;
        m(row, col) += v;
      };
      if (l.b >= 1) couple(l.b - 1, p.G * scale * std::sqrt(static_cast<double>(l.b)) * raise);  // a J+
      couple(l.b + 1, p.Gprime * scale * std::sqrt(l.b + 1.0) * raise);                        // a^dag J+
    }
  }
  return HermitianOperator(basis, std::move(blocks));
}

double boundary_leakage(const QuantumState& state) {
  double leak = 0.0;
  for (Eigen::Index i = 0; i < state.basis->size(); ++i) {
    if (state.basis->on_boundary(i)) leak += std::norm(state.amplitudes[i]);
  }
  return leak;
}

QuantumState initial_coherent_state(const ModelSpec& model, const PhasePoint& x,
                                    const BasisTruncation& trunc, double leakage_threshold) {
  if (!model.in_domain(x)) {
    throw DomainError("coherent-state centre lies outside the model domain");
  }
  auto basis = std::make_shared<const ProductBasis>(ProductBasis::for_model(model, trunc));

  Eigen::VectorXcd coeff_a;
  Eigen::VectorXcd coeff_b;
  if (model.kind() == ModelKind::PullenEdmonds) {
    const auto& p = model.pe();
    coeff_a = fock_coherent(pe_alpha(p, x.q1, x.p1), basis->dim_a());
    coeff_b = fock_coherent(pe_alpha(p, x.q2, x.p2), basis->dim_b());
  } else {
    const auto& p = model.jc();
    const double r2 = x.q1 * x.q1 + x.p1 * x.p1;
    const cplx w = cplx(x.p1, x.q1) / std::sqrt(4.0 * p.J - r2);
    const cplx v = cplx(x.p2, x.q2) / std::sqrt(2.0);
    coeff_a = atomic_coherent(w, twice_spin(model));
    coeff_b = fock_coherent(v, basis->dim_b());
  }

  QuantumState state{basis, Eigen::VectorXcd(basis->size())};
  double interior = 0.0;
  for (Eigen::Index i = 0; i < basis->size(); ++i) {
    const BasisLabel& l = basis->label(i);
    state.amplitudes[i] = coeff_a[l.a] * coeff_b[l.b];
    if (!basis->on_boundary(i)) interior += std::norm(state.amplitudes[i]);
  }
  // Boundary shells plus whatever the truncation cut off entirely.
  const double leakage = std::max(0.0, 1.0 - interior);
  if (leakage >= leakage_threshold) {
    std::ostringstream msg;
    msg << "coherent state leaks " << leakage << " into the basis boundary (threshold "
        << leakage_threshold << "); enlarge the truncation";
    throw TruncationError(msg.str());
  }
  state.amplitudes /= state.amplitudes.norm();
  return state;
}

BasisTruncation minimal_truncation(const ModelSpec& model, const std::vector<PhasePoint>& centres,
                                   double leakage_threshold) {
  if (centres.empty()) throw InputError("minimal_truncation needs at least one centre");
  // Occupation of the truncated index is Poisson: the total n1 + n2 for PE,
  // the photon number for JC. The boundary starts at cutoff - 1.
  int cutoff = 2;
  for (const auto& x : centres) {
    if (!model.in_domain(x)) throw DomainError("coherent-state centre lies outside the model domain");
    double mean = 0.0;
    if (model.kind() == ModelKind::PullenEdmonds) {
      const auto& p = model.pe();
      mean = std::norm(pe_alpha(p, x.q1, x.p1)) + std::norm(pe_alpha(p, x.q2, x.p2));
    } else {
      mean = 0.5 * (x.q2 * x.q2 + x.p2 * x.p2);
    }
    int c = std::max(cutoff, static_cast<int>(std::ceil(mean)));
    while (poisson_upper_tail(mean, c - 1) >= leakage_threshold) ++c;
    cutoff = c;
  }
  if (model.kind() == ModelKind::PullenEdmonds) return BasisTruncation::pullen_edmonds_shell(cutoff);
  return BasisTruncation::jaynes_cummings(cutoff);
}

BasisTruncation enlarged(const BasisTruncation& trunc, int extra) {
  BasisTruncation t = trunc;
  // unused cutoffs stay at zero
  if (t.n1_max > 0) t.n1_max += extra;
  if (t.n2_max > 0) t.n2_max += extra;
  if (t.n_ph_max > 0) t.n_ph_max += extra;
  if (t.shell_max) *t.shell_max += extra;
  return t;
}

}  // namespace qcc
