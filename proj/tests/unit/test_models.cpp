#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "qcc/errors.hpp"
#include "qcc/models.hpp"

using namespace qcc;
using qcc::test::pe;

namespace {

Vec4 fd_gradient(const ModelSpec& m, const PhasePoint& x, double h) {
  Vec4 g;
  for (int i = 0; i < 4; ++i) {
    Vec4 up = x.as_vector();
    Vec4 dn = x.as_vector();
    up[i] += h;
    dn[i] -= h;
    g[i] = (energy(m, PhasePoint::from_vector(up)) - energy(m, PhasePoint::from_vector(dn))) / (2 * h);
  }
  return g;
}

Vec4 symplectic(const Vec4& g) { return {g[1], -g[0], g[3], -g[2]}; }

Mat4 fd_jacobian(const ModelSpec& m, const PhasePoint& x, double h) {
  Mat4 J;
  for (int i = 0; i < 4; ++i) {
    Vec4 up = x.as_vector();
    Vec4 dn = x.as_vector();
    up[i] += h;
    dn[i] -= h;
    J.col(i) = (flow(m, PhasePoint::from_vector(up)) - flow(m, PhasePoint::from_vector(dn))) / (2 * h);
  }
  return J;
}

template <class Sampler>
void for_random_points(Sampler sample, int count, auto&& body) {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < count; ++i) body(sample(rng));
}

}  // namespace

TEST_CASE("energy closed forms") {
  CHECK(energy(pe(0.0075), {0, 0, std::sqrt(10.0), std::sqrt(106.0)}) == doctest::Approx(58.0).epsilon(1e-14));
  CHECK(energy(pe(0.3), {0, 0, 0, 0}) == 0.0);
  CHECK(energy(test::jc_fig13(), {0, 0, 0, 0}) == doctest::Approx(-29.0).epsilon(1e-15));
}

TEST_CASE("jc energy outside the coherent-state domain is rejected") {
  const auto m = test::jc_fig13();
  CHECK_THROWS_AS(energy(m, {10.0, 6.0, 0, 0}), DomainError);
  CHECK_THROWS_AS(flow(m, {10.0, 6.0, 0, 0}), DomainError);
  CHECK_FALSE(m.in_domain({10.0, 6.0, 0, 0}));
}

TEST_CASE("flow examples") {
  CHECK(flow(pe(0.0075), {0, 0, 0, 0}).isZero(0.0));
  const Vec4 f = flow(pe(0.0), {1, 0, 0, 0});
  CHECK(f.isApprox(Vec4(0, -1, 0, 0)));
}

TEST_CASE("flow and jacobian agree with finite differences") {
  const ModelSpec models[] = {pe(0.0075), pe(0.4), test::jc_fig13(), test::jc_generic()};
  for (const auto& m : models) {
    CAPTURE(m.describe());
    const bool is_pe = m.kind() == ModelKind::PullenEdmonds;
    auto sample = [&](std::mt19937_64& rng) {
      return is_pe ? test::random_point(rng, 5.0) : test::random_jc_point(rng, m.jc().J);
    };
    for_random_points(sample, 100, [&](const PhasePoint& x) {
      const Vec4 fd = symplectic(fd_gradient(m, x, 1e-6));
      CHECK((flow(m, x) - fd).cwiseAbs().maxCoeff() < 1e-6);
      const Mat4 jac = flow_jacobian(m, x);
      CHECK((jac - fd_jacobian(m, x, 1e-6)).cwiseAbs().maxCoeff() < 1e-5);
      CHECK(std::abs(jac.trace()) < 1e-12);
      CHECK(std::abs(energy_gradient(m, x).dot(flow(m, x))) < 1e-10);
    });
  }
}

TEST_CASE("uncoupled jacobian is the rotation generator") {
  Mat4 expected;
  expected << 0, 1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10; ++i) {
    CHECK(flow_jacobian(pe(0.0), test::random_point(rng, 10.0)) == expected);
  }
}

TEST_CASE("solve_p2") {
  CHECK(solve_p2(pe(0.0075), 0, 0, std::sqrt(10.0), 58.0) == doctest::Approx(std::sqrt(106.0)).epsilon(1e-14));
  CHECK_THROWS_AS(solve_p2(pe(0.0), 0, 0, 0, 0.0), InfeasibleEnergyError);
  CHECK_THROWS_AS(solve_p2(pe(0.0), 0, 0, 0, -1.0), InfeasibleEnergyError);

  const auto jc = test::jc_fig13();
  const double p2 = solve_p2(jc, 0.1, -5.005, 0.0, 40.0);
  CHECK(p2 > 0.0);
  CHECK(energy(jc, {0.1, -5.005, 0.0, p2}) == doctest::Approx(40.0).epsilon(1e-12));

  SUBCASE("round trip at random points") {
    std::mt19937_64 rng(99);
    for (const auto& m : {pe(0.0075), test::jc_generic()}) {
      for (int i = 0; i < 100; ++i) {
        PhasePoint x = m.kind() == ModelKind::PullenEdmonds ? test::random_point(rng, 4.0)
                                                            : test::random_jc_point(rng, m.jc().J);
        x.p2 = std::abs(x.p2) + 0.5;
        const double E = energy(m, x);
        const double p = solve_p2(m, x.q1, x.p1, x.q2, E);
        CHECK(std::abs(energy(m, {x.q1, x.p1, x.q2, p}) - E) < 1e-10 * std::max(1.0, std::abs(E)));
      }
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModelSpec::pullen_edmonds({0.0, 1.0, 0.1}), InputError);
  CHECK_THROWS_AS(ModelSpec::pullen_edmonds({1.0, -1.0, 0.1}), InputError);
  CHECK_THROWS_AS(ModelSpec::jaynes_cummings({1, 1, 0.25, 0, 0.3}), InputError);
  CHECK_THROWS_AS(ModelSpec::jaynes_cummings({1, 1, 0.25, 0, -0.5}), InputError);
  CHECK_NOTHROW(ModelSpec::jaynes_cummings({1, 1, 0.25, 0, 4.5}));
  CHECK_THROWS_AS(pe(0.1).jc(), InputError);
  CHECK_THROWS_AS(test::jc_fig13().pe(), InputError);
  CHECK_FALSE(pe(0.1).in_domain({std::nan(""), 0, 0, 0}));
}
