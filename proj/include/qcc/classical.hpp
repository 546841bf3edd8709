#pragma once

// Classical trajectories of the two models.
//
// Pullen-Edmonds is separable (kinetic + potential), so it is stepped with the
// fourth-order Yoshida composition of velocity Verlet. The Jaynes-Cummings
// form is not separable and uses classic RK4, stepped in the spin variables
// (Lx, Ly, Lz) of the atomic Bloch sphere and read back into the disk
// coordinates (q1, p1); both monitor the relative energy drift against a
// budget fixed when the trajectory is created.

#include <optional>
#include <utility>
#include <vector>

#include "qcc/models.hpp"

namespace qcc {

inline constexpr double kDefaultDriftBudget = 1e-8;
inline constexpr double kDefaultRenormInterval = 1.0;

enum class Observable { Q1, Q2 };

struct Trajectory {
  ModelSpec model;
  double dt = 0.0;
  int sample_stride = 1;
  std::vector<PhasePoint> samples;  // samples[k] at t = k * dt * sample_stride
  double energy0 = 0.0;
  double drift_budget = kDefaultDriftBudget;
  double max_drift = 0.0;  // largest relative drift seen over the samples

  double sample_interval() const { return dt * sample_stride; }
  double time(std::size_t k) const { return static_cast<double>(k) * sample_interval(); }
  std::vector<double> series(Observable which) const;
};

/// Relative energy drift |H(x) - E0| / |E0| (absolute when E0 == 0).
double relative_drift(const ModelSpec& model, const PhasePoint& x, double energy0);

/// Advances `x` by one step of size h with the model's integrator.
void step(const ModelSpec& model, PhasePoint& x, double h);

/// Throws IntegrationError when the drift budget is exceeded at any sample
/// and DomainError when a JC starting point lies outside q1^2 + p1^2 < 4J.
Trajectory integrate(const ModelSpec& model, const PhasePoint& x0, double dt, double t_max,
                     int sample_stride, double drift_budget = kDefaultDriftBudget);

/// Surface q2 = value crossed with p2 > 0.
struct SectionCondition {
  double value = 0.0;
};

struct SectionPoints {
  std::vector<std::pair<double, double>> points;  // (q1, p1)
  std::vector<double> crossing_times;
};

inline constexpr double kSectionTolerance = 1e-9;

/// Crossings are bracketed between integration steps and refined by
/// safeguarded secant iteration on the sub-step length until
/// |q2 - value| < 1e-9.
SectionPoints poincare_section(const ModelSpec& model, const PhasePoint& x0, const SectionCondition& cond,
                               double t_max, double dt, double drift_budget = kDefaultDriftBudget);

/// Maximal Lyapunov exponent by the Benettin procedure: a tangent vector is
/// carried along with the orbit and renormalized every `renorm_interval`.
/// PE uses the exact linearization of the symplectic step; JC integrates the
/// variational equation of the spin form with RK4, starting from the tangent
/// pushed through the chart Jacobian.
double lyapunov_max(const ModelSpec& model, const PhasePoint& x0, double t_max, double dt,
                    double renorm_interval = kDefaultRenormInterval,
                    std::optional<Vec4> tangent0 = std::nullopt,
                    double drift_budget = kDefaultDriftBudget);

}  // namespace qcc
