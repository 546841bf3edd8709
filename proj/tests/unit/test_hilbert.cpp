#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "qcc/errors.hpp"
#include "qcc/hilbert.hpp"
#include "qcc/linalg.hpp"
#include "qcc/quantum.hpp"

using namespace qcc;
using qcc::test::pe;

namespace {

cplx expectation(const HermitianOperator& H, const QuantumState& psi) {
  return psi.amplitudes.dot(H.apply(psi.amplitudes));
}

// <psi| q1 |psi> and <psi| n1 |psi> over a PE basis, from the ladder elements.
std::pair<double, double> mode1_moments(const QuantumState& psi) {
  const auto& b = *psi.basis;
  cplx q = 0.0;
  double n = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const auto [a, c] = b.label(i);
    n += a * std::norm(psi.amplitudes[i]);
    const Eigen::Index up = b.index_of(a + 1, c);
    if (up >= 0) q += std::conj(psi.amplitudes[up]) * psi.amplitudes[i] * std::sqrt(2.0 * (a + 1));
  }
  return {q.real(), n};
}

}  // namespace

TEST_CASE("product basis bookkeeping") {
  ProductBasis full(4, 3);
  CHECK(full.size() == 12);
  CHECK(full.index_of(2, 1) == 7);
  CHECK(full.index_of(4, 0) == -1);

  ProductBasis shell(6, 6, 5);
  CHECK(shell.size() == 21);
  CHECK(shell.index_of(3, 3) == -1);
  CHECK(shell.index_of(2, 3) >= 0);
  CHECK(shell.on_boundary(shell.index_of(2, 3)));
  CHECK(shell.on_boundary(shell.index_of(0, 4)));
  CHECK_FALSE(shell.on_boundary(shell.index_of(1, 2)));

  const auto jc = ProductBasis::for_model(test::jc_fig13(), BasisTruncation::jaynes_cummings(10));
  CHECK(jc.dim_a() == 59);
  CHECK(jc.dim_b() == 11);
  CHECK(jc.size() == 59 * 11);
  CHECK_FALSE(jc.on_boundary(jc.index_of(58, 0)));
  CHECK(jc.on_boundary(jc.index_of(0, 9)));
}

TEST_CASE("uncoupled oscillator spectrum") {
  const auto H = build_hamiltonian(pe(0.0), BasisTruncation::pullen_edmonds(5, 5));
  CHECK(H.dimension() == 36);
  const Eigen::MatrixXd dense = H.to_dense();
  CHECK((dense - Eigen::MatrixXd(dense.diagonal().asDiagonal())).isZero(0.0));
  const auto es = diagonalize(H);
  // k+1 states at energy k+1 for k <= 5
  int pos = 0;
  for (int k = 0; k <= 5; ++k) {
    for (int j = 0; j <= k; ++j) CHECK(es.eigenvalues()[pos++] == doctest::Approx(k + 1.0).epsilon(1e-12));
  }
}

TEST_CASE("pullen-edmonds ground state from perturbation theory") {
  const double lambda = 0.0075;
  const auto es = diagonalize(build_hamiltonian(pe(lambda), BasisTruncation::pullen_edmonds(40, 40)));
  const double e0 = es.eigenvalues()[0];
  // q1^2 q2^2 |00> = (|00> + sqrt2 |20> + sqrt2 |02> + 2 |22>) / 4 gives the second-order shift -3 lambda^2 / 16
  CHECK(std::abs(e0 - (1.0 + lambda / 4.0 - 3.0 * lambda * lambda / 16.0)) < 5e-6);
  CHECK(std::abs(e0 - 1.001875) < 2e-5);
}

TEST_CASE("jaynes-cummings non-interacting limit") {
  const auto m = ModelSpec::jaynes_cummings({1.3, 0.7, 0.0, 0.0, 0.5});
  const auto H = build_hamiltonian(m, BasisTruncation::jaynes_cummings(10));
  const auto& basis = *H.basis();
  const Eigen::MatrixXd dense = H.to_dense();
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const auto [k, n] = basis.label(i);
    CHECK(dense(i, i) == doctest::Approx(1.3 * n + 0.7 * (k - 0.5)).epsilon(1e-14));
  }
  CHECK((dense - Eigen::MatrixXd(dense.diagonal().asDiagonal())).isZero(0.0));
}

TEST_CASE("hamiltonians are symmetric and block structure is sound") {
  for (const auto& m : {pe(0.0075), test::jc_generic()}) {
    const auto trunc = m.kind() == ModelKind::PullenEdmonds ? BasisTruncation::pullen_edmonds_shell(20)
                                                            : BasisTruncation::jaynes_cummings(12);
    const auto H = build_hamiltonian(m, trunc);
    CHECK(H.max_asymmetry() <= 1e-12);
    CHECK(H.blocks().size() >= 2);
    const Eigen::MatrixXd dense = H.to_dense();
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("memory budget") {
  CHECK_THROWS_AS(build_hamiltonian(pe(0.0075), BasisTruncation::pullen_edmonds(95, 95), 1 << 20), ResourceError);
}

TEST_CASE("coherent states") {
  SUBCASE("vacuum") {
    const auto psi = initial_coherent_state(pe(0.0075), {0, 0, 0, 0}, BasisTruncation::pullen_edmonds(10, 10));
    CHECK(psi.amplitudes[psi.basis->index_of(0, 0)] == cplx(1.0, 0.0));
    CHECK(psi.amplitudes.squaredNorm() == 1.0);
    const auto jc = initial_coherent_state(test::jc_fig13(), {0, 0, 0, 0}, BasisTruncation::jaynes_cummings(10));
    CHECK(jc.amplitudes[jc.basis->index_of(0, 0)] == cplx(1.0, 0.0));
    CHECK(jc.amplitudes.squaredNorm() == 1.0);
  }
  SUBCASE("oscillator moments") {
    const auto psi = initial_coherent_state(pe(0.0), {1, 0, 0, 0}, BasisTruncation::pullen_edmonds(30, 30));
    const auto [q, n] = mode1_moments(psi);
    CHECK(std::abs(q - 1.0) < 1e-8);
    CHECK(std::abs(n - 0.5) < 1e-8);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-10);
  }
  SUBCASE("leakage") {
    CHECK_THROWS_AS(initial_coherent_state(pe(0.0), {6, 0, 0, 0}, BasisTruncation::pullen_edmonds(10, 10)),
                    TruncationError);
    CHECK_THROWS_AS(initial_coherent_state(test::jc_fig13(), {11, 0, 0, 0}, BasisTruncation::jaynes_cummings(5)),
                    DomainError);
  }
}

TEST_CASE("coherent-state energy matches the classical limit") {
  SUBCASE("jaynes-cummings expectation equals the classical Hamiltonian") {
    std::mt19937_64 rng(3);
    const auto m = test::jc_generic();
    const auto H = build_hamiltonian(m, BasisTruncation::jaynes_cummings(60));
    for (int i = 0; i < 10; ++i) {
      const PhasePoint x = test::random_jc_point(rng, m.jc().J);
      const auto psi = initial_coherent_state(m, x, BasisTruncation::jaynes_cummings(60));
      CHECK(std::abs(expectation(H, psi).real() - energy(m, x)) < 1e-8);
    }
  }
  SUBCASE("pullen-edmonds expectation adds zero-point terms") {
    const double lambda = 0.0075;
    const auto m = pe(lambda);
    const auto trunc = BasisTruncation::pullen_edmonds_shell(70);
    const auto H = build_hamiltonian(m, trunc);
    const PhasePoint x{1.5, -0.7, 2.0, 0.9};
    const auto psi = initial_coherent_state(m, x, trunc);
    // <q^2> = q^2 + 1/2 in a coherent state
    const double expected = energy(m, x) + 1.0 + lambda * (0.5 * x.q1 * x.q1 + 0.5 * x.q2 * x.q2 + 0.25);
    CHECK(std::abs(expectation(H, psi).real() - expected) < 1e-8);
  }
}

TEST_CASE("minimal truncation passes the leakage criterion and is tight") {
  const auto m = pe(0.0075);
  const std::vector<PhasePoint> centres{{0, 0, std::sqrt(10.0), std::sqrt(106.0)}, {2, 1, 1, 3}};
  const auto trunc = minimal_truncation(m, centres);
  REQUIRE(trunc.shell_max.has_value());
  for (const auto& x : centres) CHECK_NOTHROW(initial_coherent_state(m, x, trunc));
  const auto smaller = BasisTruncation::pullen_edmonds_shell(*trunc.shell_max - 1);
  CHECK_THROWS_AS(initial_coherent_state(m, centres[0], smaller), TruncationError);
  CHECK(*enlarged(trunc, 8).shell_max == *trunc.shell_max + 8);

  const auto jc = test::jc_fig13();
  const std::vector<PhasePoint> jc_centres{{0.1, -5.005, 0.0, solve_p2(jc, 0.1, -5.005, 0.0, 40.0)}};
  const auto jt = minimal_truncation(jc, jc_centres);
  CHECK_NOTHROW(initial_coherent_state(jc, jc_centres[0], jt));
  CHECK_THROWS_AS(initial_coherent_state(jc, jc_centres[0], BasisTruncation::jaynes_cummings(jt.n_ph_max - 1)),
                  TruncationError);
}

TEST_CASE("linalg wrappers") {
  Eigen::MatrixXd d = Eigen::Vector3d(3, 1, 2).asDiagonal();
  const auto sym = linalg::eigh(d);
  CHECK(sym.values.isApprox(Eigen::Vector3d(1, 2, 3)));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd A(50, 50);
  for (Eigen::Index i = 0; i < 50; ++i)
    for (Eigen::Index j = 0; j < 50; ++j) A(i, j) = cplx(g(rng), g(rng));
  const Eigen::MatrixXcd H = A + A.adjoint();
  const auto he = linalg::eigh(H);
  const Eigen::MatrixXcd rebuilt = he.vectors * he.values.asDiagonal() * he.vectors.adjoint();
  CHECK((rebuilt - H).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((he.vectors.adjoint() * he.vectors - Eigen::MatrixXcd::Identity(50, 50)).cwiseAbs().maxCoeff() < 1e-10);
  for (Eigen::Index i = 1; i < 50; ++i) CHECK(he.values[i] >= he.values[i - 1]);
}
