#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "qcc/classical.hpp"
#include "qcc/datasets.hpp"
#include "qcc/errors.hpp"

using namespace qcc;
using qcc::test::pe;

TEST_CASE("harmonic closed form") {
  const auto traj = integrate(pe(0.0), {1, 0, 0, 0}, 1e-3, 100.0, 10);
  CHECK(traj.samples.size() == 10001);
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    worst = std::max(worst, std::abs(traj.samples[k].q1 - std::cos(traj.time(k))));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("regular orbit conserves energy over the long window") {
  const PhasePoint x0{0, 0, std::sqrt(10.0), std::sqrt(106.0)};
  const auto traj = integrate(pe(0.0075), x0, 1.0 / 256, 1 << 17, 32);
  CHECK(traj.samples.size() == (1u << 20) + 1);
  CHECK(traj.max_drift < 1e-8);
  for (const auto& x : traj.samples) CHECK_FALSE(relative_drift(traj.model, x, 58.0) > 1e-8);
}

TEST_CASE("time reversal") {
  for (const auto& m : {pe(0.0075), test::jc_generic()}) {
    const PhasePoint x0 = m.kind() == ModelKind::PullenEdmonds ? PhasePoint{1.0, 2.0, 3.0, 4.0}
                                                               : PhasePoint{1.0, -2.0, 0.5, 1.5};
    const double t_max = 50.0;
    const double dt = 1e-3;
    const auto fwd = integrate(m, x0, dt, t_max, 1000);
    PhasePoint back = fwd.samples.back();
    back.p1 = -back.p1;
    back.p2 = -back.p2;
    const auto rev = integrate(m, back, dt, t_max, 1000);
    PhasePoint end = rev.samples.back();
    end.p1 = -end.p1;
    end.p2 = -end.p2;
    CHECK((end.as_vector() - x0.as_vector()).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("drift budget and domain errors") {
  CHECK_THROWS_AS(integrate(pe(0.0075), {0, 0, std::sqrt(10.0), std::sqrt(106.0)}, 0.5, 100.0, 1, 1e-12),
                  IntegrationError);
  CHECK_THROWS_AS(integrate(pe(0.0), {0, 0, 0, 0}, 0.0, 1.0, 1), InputError);
  CHECK_THROWS_AS(integrate(pe(0.0), {0, 0, 0, 0}, 0.1, 0.01, 1), InputError);
  CHECK_THROWS_AS(integrate(test::jc_fig13(), {11, 0, 0, 0}, 0.01, 1.0, 1), DomainError);
}

TEST_CASE("fixed point gives a constant trajectory") {
  const auto traj = integrate(pe(0.0075), {0, 0, 0, 0}, 0.01, 10.0, 10);
  for (const auto& x : traj.samples) CHECK(x.as_vector().isZero(0.0));
}

TEST_CASE("poincare section of the uncoupled system") {
  const double q2 = std::sqrt(10.0);
  const PhasePoint x0{1, 0, q2, std::sqrt(106.0)};
  const auto sec = poincare_section(pe(0.0), x0, {q2}, 200.0, 1e-3);
  REQUIRE(sec.points.size() >= 30);
  for (std::size_t i = 1; i < sec.crossing_times.size(); ++i) {
    CHECK(std::abs(sec.crossing_times[i] - sec.crossing_times[i - 1] - 2.0 * std::numbers::pi) < 1e-6);
  }
  for (const auto& [q1, p1] : sec.points) CHECK(std::abs(q1 * q1 + p1 * p1 - 1.0) < 1e-6);

  SUBCASE("no crossings") {
    const auto none = poincare_section(pe(0.0), {1, 0, 1, 0}, {q2}, 50.0, 1e-2);
    CHECK(none.points.empty());
  }
}

TEST_CASE("section points meet the surface with positive momentum") {
  const auto m = pe(0.0075);
  const double q2 = std::sqrt(10.0);
  const PhasePoint x0{0.9 * q2, 2.4072 * q2, q2, solve_p2(m, 0.9 * q2, 2.4072 * q2, q2, 58.0)};
  const auto sec = poincare_section(m, x0, {q2}, 300.0, 1.0 / 256);
  REQUIRE(sec.points.size() > 10);

  const auto traj_check = [&](double t) {
    PhasePoint x = x0;
    const double h = 1.0 / 256;
    const long long n = static_cast<long long>(t / h);
    for (long long i = 0; i < n; ++i) step(m, x, h);
    step(m, x, t - n * h);
    return x;
  };
  for (std::size_t i = 0; i < sec.crossing_times.size(); i += 7) {
    const PhasePoint x = traj_check(sec.crossing_times[i]);
    CHECK(std::abs(x.q2 - q2) < 1e-9);
    CHECK(x.p2 > 0.0);
  }

  SUBCASE("halving the step moves regular section points by less than 1e-6") {
    const auto fine = poincare_section(m, x0, {q2}, 300.0, 1.0 / 512);
    REQUIRE(fine.points.size() == sec.points.size());
    for (std::size_t i = 0; i < sec.points.size(); ++i) {
      CHECK(std::abs(fine.points[i].first - sec.points[i].first) < 1e-6);
      CHECK(std::abs(fine.points[i].second - sec.points[i].second) < 1e-6);
    }
  }
}

TEST_CASE("lyapunov of the integrable system") {
  const PhasePoint x0{1, 0.5, 2, 1};
  CHECK(std::abs(lyapunov_max(pe(0.0), x0, 1e4, 0.01)) < 1e-3);

  // With omega = 2 the tangent norm oscillates in [1, 2] from (1, 0, 0, 0), so
  // the estimate is ln r(t) / t: positive, bounded by ln 2 / t, and shrinking as t doubles.
  const auto stiff = ModelSpec::pullen_edmonds({1.0, 2.0, 0.0});
  double bound = 1.0;
  for (double t : {1e3, 2e3, 4e3, 8e3}) {
    const double est = lyapunov_max(stiff, x0, t, 0.002, 1.0, Vec4(1, 0, 0, 0));
    CHECK(est >= -1e-12);
    CHECK(est <= std::log(2.0) / t + 1e-12);
    CHECK(std::log(2.0) / t < bound);
    bound = std::log(2.0) / t;
  }
  CHECK_THROWS_AS(lyapunov_max(pe(0.0), x0, 10.0, 0.1, 0.01), InputError);
  CHECK_THROWS_AS(lyapunov_max(pe(0.0), x0, 10.0, 0.1, 1.0, Vec4::Zero()), InputError);
}

TEST_CASE("lyapunov of a near-harmonic jaynes-cummings orbit is small") {
  const auto m = test::jc_generic();
  const PhasePoint x0{0.5, -1.0, 0.0, 1.0};
  CHECK(lyapunov_max(m, x0, 2000.0, 0.01) < 0.02);
}

TEST_CASE("jaynes-cummings steps match RK4 on the disk equations away from the rim") {
  const auto m = test::jc_generic();
  std::mt19937_64 rng(11);
  const double h = 1e-3;
  for (int trial = 0; trial < 20; ++trial) {
    const PhasePoint x0 = test::random_jc_point(rng, m.jc().J);
    const Vec4 y = x0.as_vector();
    const Vec4 k1 = flow(m, x0);
    const Vec4 k2 = flow(m, PhasePoint::from_vector(y + 0.5 * h * k1));
    const Vec4 k3 = flow(m, PhasePoint::from_vector(y + 0.5 * h * k2));
    const Vec4 k4 = flow(m, PhasePoint::from_vector(y + h * k3));
    const Vec4 expected = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    PhasePoint x = x0;
    step(m, x, h);
    CHECK((x.as_vector() - expected).norm() < 1e-11);
  }
}

TEST_CASE("jaynes-cummings orbits pass the pole of the disk chart") {
  // Island-A torus of the mixed JC dataset reaches q1^2 + p1^2 = 4J.
  const CicsDataset d = load_cics(DatasetId::JcMixed);
  const PhasePoint x0 = d.point(0);
  const double J = d.model.jc().J;
  const auto traj = integrate(d.model, x0, 1.0 / 256, 2000.0, 1);
  CHECK(traj.max_drift < 1e-8);
  double r_max = 0.0;
  for (const auto& x : traj.samples) r_max = std::max(r_max, x.q1 * x.q1 + x.p1 * x.p1);
  CHECK(r_max <= 4.0 * J);
  CHECK(r_max > 3.99 * J);
}
