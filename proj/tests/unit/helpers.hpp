#pragma once

#include <cmath>
#include <random>

#include "qcc/models.hpp"

namespace qcc::test {

inline PhasePoint random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return {u(rng), u(rng), u(rng), u(rng)};
}

// Random point strictly inside the JC domain q1^2 + p1^2 < 4J.
inline PhasePoint random_jc_point(std::mt19937_64& rng, double J) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double r_max = 0.95 * std::sqrt(4.0 * J);
  PhasePoint x;
  do {
    x = {r_max * u(rng), r_max * u(rng), 0.0, 0.0};
  } while (x.q1 * x.q1 + x.p1 * x.p1 >= r_max * r_max);
  x.q2 = 4.0 * u(rng);
  x.p2 = 4.0 * u(rng);
  return x;
}

inline ModelSpec pe(double lambda) { return ModelSpec::pullen_edmonds({1.0, 1.0, lambda}); }

inline ModelSpec jc_fig13() { return ModelSpec::jaynes_cummings({1.0, 1.0, 0.25, 0.0, 29.0}); }

inline ModelSpec jc_generic() { return ModelSpec::jaynes_cummings({1.1, 0.9, 0.4, 0.25, 7.5}); }

}  // namespace qcc::test
