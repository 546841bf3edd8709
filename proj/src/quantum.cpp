#include "qcc/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qcc/errors.hpp"
#include "qcc/linalg.hpp"

namespace qcc {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kNegativeEigenvalueTolerance = 1e-8;
constexpr Eigen::Index kTimeChunk = 64;
constexpr double kTailWeight = 1e-24;

void require_hermitian(const HermitianOperator& H) {
  for (const auto& block : H.blocks()) {
    if (block.matrix.size() == 0) continue;
    const double scale = std::max(1.0, block.matrix.cwiseAbs().maxCoeff());
    const double asym = (block.matrix - block.matrix.transpose()).cwiseAbs().maxCoeff();
    if (asym > kHermitianTolerance * scale) {
      std::ostringstream msg;
      msg << "operator is not Hermitian: max |H_ij - H_ji| = " << asym;
      throw InputError(msg.str());
    }
  }
}

void require_compatible(const EigenSystem& es, const QuantumState& psi) {
  if (!psi.basis || psi.amplitudes.size() != es.dimension() ||
      psi.basis->dim_a() != es.basis()->dim_a() || psi.basis->dim_b() != es.basis()->dim_b()) {
    throw InputError("state and eigensystem live on different bases");
  }
}

std::vector<Eigen::VectorXcd> block_coefficients(const EigenSystem& es, const QuantumState& psi) {
  std::vector<Eigen::VectorXcd> coeffs;
  coeffs.reserve(es.blocks().size());
  for (const auto& block : es.blocks()) {
    const auto n = static_cast<Eigen::Index>(block.members.size());
    Eigen::VectorXd re(n);
    Eigen::VectorXd im(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx a = psi.amplitudes[block.members[static_cast<std::size_t>(i)]];
      re[i] = a.real();
      im[i] = a.imag();
    }
    Eigen::VectorXcd c(n);
    c.real() = block.vectors.transpose() * re;
    c.imag() = block.vectors.transpose() * im;
    coeffs.push_back(std::move(c));
  }
  return coeffs;
}

// Eigenvector columns [first, first + count) of a block outside which the
// state carries less than kTailWeight of probability on either side.
struct ActiveRange {
  Eigen::Index first = 0;
  Eigen::Index count = 0;
};

ActiveRange active_range(const Eigen::VectorXcd& c) {
  const Eigen::Index n = c.size();
  Eigen::Index lo = 0;
  for (double tail = 0.0; lo < n; ++lo) {
    tail += std::norm(c[lo]);
    if (tail > kTailWeight) break;
  }
  Eigen::Index hi = n;
  for (double tail = 0.0; hi > lo; --hi) {
    tail += std::norm(c[hi - 1]);
    if (tail > kTailWeight) break;
  }
  return {lo, hi - lo};
}

// Columns psi(t_j) for the given times, using real GEMMs on the real and
// imaginary parts of the phase-rotated eigen-coefficients.
Eigen::MatrixXcd propagate(const EigenSystem& es, const std::vector<Eigen::VectorXcd>& coeffs,
                           std::span<const double> times) {
  const auto count = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXcd out(es.dimension(), count);
  for (std::size_t b = 0; b < es.blocks().size(); ++b) {
    const EigenBlock& block = es.blocks()[b];
    const Eigen::VectorXcd& c = coeffs[b];
    const auto n = static_cast<Eigen::Index>(block.members.size());
    const ActiveRange range = active_range(c);
    Eigen::MatrixXd rotated(range.count, 2 * count);
    for (Eigen::Index j = 0; j < count; ++j) {
      const double t = times[static_cast<std::size_t>(j)];
      for (Eigen::Index k = 0; k < range.count; ++k) {
        const Eigen::Index col = range.first + k;
        const cplx z = c[col] * std::polar(1.0, -block.values[col] * t);
        rotated(k, j) = z.real();
        rotated(k, count + j) = z.imag();
      }
    }
    Eigen::MatrixXd image(n, 2 * count);
    linalg::gemm(block.vectors.middleCols(range.first, range.count), rotated, image);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index row = block.members[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < count; ++j) out(row, j) = cplx(image(i, j), image(i, count + j));
    }
  }
  return out;
}

bool keeps_a(Subsystem s) { return s == Subsystem::Mode1 || s == Subsystem::Atom; }

Eigen::MatrixXcd partial_trace(const ProductBasis& basis, const Eigen::Ref<const Eigen::VectorXcd>& amps,
                               Subsystem subsystem) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(basis.dim_a(), basis.dim_b());
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const BasisLabel& l = basis.label(i);
    m(l.a, l.b) = amps[i];
  }
  if (keeps_a(subsystem)) return linalg::gram(m);
  return linalg::gram(m.transpose());
}

double entropy_from_eigenvalues(const Eigen::VectorXd& values) {
  double s = 0.0;
  for (double lambda : values) {
    if (lambda < -kNegativeEigenvalueTolerance) {
      std::ostringstream msg;
      msg << "reduced density has eigenvalue " << lambda;
      throw InvalidDensityError(msg.str());
    }
    const double p = std::clamp(lambda, 0.0, 1.0);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

}  // namespace

EigenSystem::EigenSystem(std::shared_ptr<const ProductBasis> basis, std::vector<EigenBlock> blocks)
    : basis_(std::move(basis)), blocks_(std::move(blocks)) {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (Eigen::Index k = 0; k < blocks_[b].values.size(); ++k) order_.emplace_back(b, k);
  }
  if (static_cast<Eigen::Index>(order_.size()) != basis_->size()) {
    throw InputError("eigen blocks do not cover the basis");
  }
  std::stable_sort(order_.begin(), order_.end(), [this](const auto& x, const auto& y) {
    return blocks_[x.first].values[x.second] < blocks_[y.first].values[y.second];
  });
  sorted_values_.resize(static_cast<Eigen::Index>(order_.size()));
  for (std::size_t n = 0; n < order_.size(); ++n) {
    sorted_values_[static_cast<Eigen::Index>(n)] = blocks_[order_[n].first].values[order_[n].second];
  }
}

Eigen::VectorXd EigenSystem::eigenvector(Eigen::Index n) const {
  if (n < 0 || n >= dimension()) throw InputError("eigenvector index out of range");
  const auto& [b, col] = order_[static_cast<std::size_t>(n)];
  const EigenBlock& block = blocks_[b];
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dimension());
  for (std::size_t i = 0; i < block.members.size(); ++i) {
    v[block.members[i]] = block.vectors(static_cast<Eigen::Index>(i), col);
  }
  return v;
}

Eigen::VectorXcd EigenSystem::project(const QuantumState& psi) const {
  require_compatible(*this, psi);
  const auto coeffs = block_coefficients(*this, psi);
  Eigen::VectorXcd out(dimension());
  for (std::size_t n = 0; n < order_.size(); ++n) {
    out[static_cast<Eigen::Index>(n)] = coeffs[order_[n].first][order_[n].second];
  }
  return out;
}

EigenSystem diagonalize(const HermitianOperator& H) { return diagonalize(HermitianOperator(H)); }

EigenSystem diagonalize(HermitianOperator&& H) {
  require_hermitian(H);
  auto basis = H.basis();
  std::vector<EigenBlock> blocks;
  blocks.reserve(H.blocks().size());
  // eigh works in place on the block storage
  for (auto& block : std::move(H).take_blocks()) {
    auto solved = linalg::eigh(std::move(block.matrix));
    blocks.push_back({std::move(block.members), std::move(solved.values), std::move(solved.vectors)});
  }
  return EigenSystem(std::move(basis), std::move(blocks));
}

std::vector<QuantumState> evolve(const EigenSystem& es, const QuantumState& psi0,
                                 std::span<const double> times) {
  require_compatible(es, psi0);
  for (double t : times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("evolution times must be finite and >= 0");
  }
  const auto coeffs = block_coefficients(es, psi0);
  std::vector<QuantumState> states;
  states.reserve(times.size());
  for (std::size_t start = 0; start < times.size(); start += kTimeChunk) {
    const std::size_t len = std::min<std::size_t>(kTimeChunk, times.size() - start);
    const Eigen::MatrixXcd cols = propagate(es, coeffs, times.subspan(start, len));
    for (Eigen::Index j = 0; j < cols.cols(); ++j) {
      if (times[start + static_cast<std::size_t>(j)] == 0.0) {
        states.push_back(psi0);  // exact identity at t = 0
      } else {
        states.push_back({psi0.basis, cols.col(j)});
      }
    }
  }
  return states;
}

std::string to_string(Subsystem s) {
  switch (s) {
    case Subsystem::Mode1: return "mode1";
    case Subsystem::Mode2: return "mode2";
    case Subsystem::Atom: return "atom";
    case Subsystem::Field: return "field";
  }
  return "mode1";
}

Subsystem subsystem_from_string(const std::string& name) {
  if (name == "mode1") return Subsystem::Mode1;
  if (name == "mode2") return Subsystem::Mode2;
  if (name == "atom") return Subsystem::Atom;
  if (name == "field") return Subsystem::Field;
  throw InputError("unknown subsystem '" + name + "'");
}

ReducedDensity reduced_density(const QuantumState& psi, Subsystem subsystem) {
  if (!psi.basis || psi.amplitudes.size() != psi.basis->size()) {
    throw InputError("state amplitudes do not match their basis");
  }
  return {partial_trace(*psi.basis, psi.amplitudes, subsystem), subsystem};
}

double von_neumann_entropy(const ReducedDensity& rho) {
  if (rho.matrix.rows() != rho.matrix.cols() || rho.matrix.rows() == 0) {
    throw InputError("density matrix must be square and non-empty");
  }
  return entropy_from_eigenvalues(linalg::eigvalsh(rho.matrix));
}

std::vector<double> entropy_values(const EigenSystem& es, const QuantumState& psi0,
                                   std::span<const double> times, Subsystem subsystem) {
  require_compatible(es, psi0);
  for (double t : times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("evolution times must be finite and >= 0");
  }
  std::vector<double> values;
  values.reserve(times.size());
  const auto coeffs = block_coefficients(es, psi0);
  for (std::size_t start = 0; start < times.size(); start += kTimeChunk) {
    const std::size_t len = std::min<std::size_t>(kTimeChunk, times.size() - start);
    const Eigen::MatrixXcd cols = propagate(es, coeffs, times.subspan(start, len));
    for (Eigen::Index j = 0; j < cols.cols(); ++j) {
      const bool initial = times[start + static_cast<std::size_t>(j)] == 0.0;
      const Eigen::VectorXcd amps = initial ? psi0.amplitudes : Eigen::VectorXcd(cols.col(j));
      const ReducedDensity rho{partial_trace(*es.basis(), amps, subsystem), subsystem};
      values.push_back(von_neumann_entropy(rho));
    }
  }
  return values;
}

EntropyCurve entropy_curve(const EigenSystem& es, const QuantumState& psi0, double t_max,
                           double dt_sample, Subsystem subsystem) {
  if (!(dt_sample > 0.0) || !(t_max >= 0.0)) throw InputError("entropy curve needs dt > 0 and t_max >= 0");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt_sample + 1e-9));
  EntropyCurve curve;
  curve.times.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) curve.times[k] = static_cast<double>(k) * dt_sample;
  curve.values = entropy_values(es, psi0, curve.times, subsystem);
  const auto best = std::max_element(curve.values.begin(), curve.values.end());
  curve.s_max = *best;
  curve.t_of_max = curve.times[static_cast<std::size_t>(best - curve.values.begin())];
  return curve;
}

DensitySpectrum density_spectrum(const EigenSystem& es, const QuantumState& psi0, double floor) {
  const Eigen::VectorXcd overlaps = es.project(psi0);
  DensitySpectrum out;
  double sum_sq = 0.0;
  for (Eigen::Index n = 0; n < overlaps.size(); ++n) {
    const double rho = std::norm(overlaps[n]);
    out.total_population += rho;
    sum_sq += rho * rho;
    if (rho >= floor) out.lines.push_back({es.eigenvalues()[n], rho});
  }
  out.participation_ratio = 1.0 / sum_sq;
  return out;
}

}  // namespace qcc
