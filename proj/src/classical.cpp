#include "qcc/classical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Geometry>

#include "qcc/errors.hpp"

namespace qcc {

namespace {

// Yoshida's fourth-order triple-jump weights.
const double kCbrt2 = std::cbrt(2.0);
const double kW1 = 1.0 / (2.0 - kCbrt2);
const double kW0 = -kCbrt2 / (2.0 - kCbrt2);

struct PeForce {
  double k;       // m w^2
  double lambda;
  double inv_m;

  // -dV/dq
  void operator()(double q1, double q2, double& f1, double& f2) const {
    f1 = -(k * q1 + 2.0 * lambda * q1 * q2 * q2);
    f2 = -(k * q2 + 2.0 * lambda * q2 * q1 * q1);
  }
  // Hessian of V, symmetric 2x2: (h11, h12, h22)
  void hessian(double q1, double q2, double& h11, double& h12, double& h22) const {
    h11 = k + 2.0 * lambda * q2 * q2;
    h22 = k + 2.0 * lambda * q1 * q1;
    h12 = 4.0 * lambda * q1 * q2;
  }
};

PeForce pe_force(const ModelSpec& model) {
  const auto& p = model.pe();
  return {p.m * p.omega * p.omega, p.lambda, 1.0 / p.m};
}

// Kick/drift sequence of the Yoshida composition with merged half-kicks.
constexpr int kStages = 4;
const double kKick[kStages] = {0.5 * kW1, 0.5 * (kW1 + kW0), 0.5 * (kW0 + kW1), 0.5 * kW1};
const double kDrift[kStages - 1] = {kW1, kW0, kW1};

void yoshida_step(const PeForce& force, PhasePoint& x, double h) {
  double f1 = 0.0;
  double f2 = 0.0;
  for (int s = 0; s < kStages; ++s) {
    force(x.q1, x.q2, f1, f2);
    x.p1 += kKick[s] * h * f1;
    x.p2 += kKick[s] * h * f2;
    if (s + 1 < kStages) {
      x.q1 += kDrift[s] * h * force.inv_m * x.p1;
      x.q2 += kDrift[s] * h * force.inv_m * x.p2;
    }
  }
}

// Same step with its exact linearization applied to the tangent vector
// d = (dq1, dp1, dq2, dp2).
void yoshida_tangent_step(const PeForce& force, PhasePoint& x, Vec4& d, double h) {
  double f1 = 0.0;
  double f2 = 0.0;
  double h11 = 0.0;
  double h12 = 0.0;
  double h22 = 0.0;
  for (int s = 0; s < kStages; ++s) {
    force(x.q1, x.q2, f1, f2);
    force.hessian(x.q1, x.q2, h11, h12, h22);
    const double c = kKick[s] * h;
    x.p1 += c * f1;
    x.p2 += c * f2;
    d[1] -= c * (h11 * d[0] + h12 * d[2]);
    d[3] -= c * (h12 * d[0] + h22 * d[2]);
    if (s + 1 < kStages) {
      const double e = kDrift[s] * h * force.inv_m;
      x.q1 += e * x.p1;
      x.q2 += e * x.p2;
      d[0] += e * d[1];
      d[2] += e * d[3];
    }
  }
}

// Jaynes-Cummings in spin variables y = (Lx, Ly, Lz, q2, p2) with
//   Lx = sqrt(J) p1 s,  Ly = sqrt(J) q1 s,  Lz = (q1^2 + p1^2)/2 - J,
// s = sqrt(1 - (q1^2 + p1^2)/4J). The disk chart is singular on its rim
// q1^2 + p1^2 = 4J (the pole Lz = J), which regular orbits do reach; the spin
// form is smooth everywhere. H = w/2 (q2^2 + p2^2) + eps Lz
// + (G+ p2 Lx + G- q2 Ly)/sqrt(J), and {Lx, Ly} = Lz cyclically.
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

struct JcSpin {
  double omega;
  double epsilon;
  double gp;  // (G + G') / sqrt(J)
  double gm;  // (G - G') / sqrt(J)
  double J;

  explicit JcSpin(const ModelSpec& model) {
    const auto& p = model.jc();
    const double root = std::sqrt(p.J);
    omega = p.omega;
    epsilon = p.epsilon;
    gp = (p.G + p.Gprime) / root;
    gm = (p.G - p.Gprime) / root;
    J = p.J;
  }

  Vec5 to_spin(const PhasePoint& x) const {
    const double r2 = x.q1 * x.q1 + x.p1 * x.p1;
    const double root = std::sqrt(std::max(0.0, J - 0.25 * r2));
    Vec5 y;
    y << x.p1 * root, x.q1 * root, 0.5 * r2 - J, x.q2, x.p2;
    return y;
  }

  // Chart Jacobian d(Lx, Ly, Lz)/d(q1, p1); q2, p2 map to themselves.
  Mat5 chart_jacobian(const PhasePoint& x) const {
    const double r2 = x.q1 * x.q1 + x.p1 * x.p1;
    const double root = std::sqrt(std::max(0.0, J - 0.25 * r2));
    const double c = root > 0.0 ? 0.25 / root : 0.0;
    Mat5 m = Mat5::Zero();
    // columns follow (q1, p1, q2, p2) with an unused fifth column
    m(0, 0) = -c * x.p1 * x.q1;
    m(0, 1) = root - c * x.p1 * x.p1;
    m(1, 0) = root - c * x.q1 * x.q1;
    m(1, 1) = -c * x.q1 * x.p1;
    m(2, 0) = x.q1;
    m(2, 1) = x.p1;
    m(3, 2) = 1.0;
    m(4, 3) = 1.0;
    return m;
  }

  // Projects L back onto |L| = J and reads off the disk coordinates.
  PhasePoint from_spin(Vec5& y) const {
    const double norm = y.head<3>().norm();
    if (norm > 0.0) y.head<3>() *= J / norm;
    const double lz = std::clamp(y[2], -J, J);
    const double r = std::sqrt(2.0 * (lz + J));
    const double rho = std::hypot(y[0], y[1]);
    if (rho == 0.0) return {0.0, r, y[3], y[4]};
    return {r * y[1] / rho, r * y[0] / rho, y[3], y[4]};
  }

  Vec5 rhs(const Vec5& y) const {
    const Eigen::Vector3d b(gp * y[4], gm * y[3], epsilon);
    const Eigen::Vector3d l = y.head<3>();
    Vec5 f;
    f.head<3>() = b.cross(l);
    f[3] = omega * y[4] + gp * y[0];
    f[4] = -omega * y[3] - gm * y[1];
    return f;
  }

  Vec5 tangent_rhs(const Vec5& y, const Vec5& d) const {
    const Eigen::Vector3d b(gp * y[4], gm * y[3], epsilon);
    const Eigen::Vector3d db(gp * d[4], gm * d[3], 0.0);
    const Eigen::Vector3d l = y.head<3>();
    const Eigen::Vector3d dl = d.head<3>();
    Vec5 f;
    f.head<3>() = db.cross(l) + b.cross(dl);
    f[3] = omega * d[4] + gp * d[0];
    f[4] = -omega * d[3] - gm * d[1];
    return f;
  }

  void step(Vec5& y, double h) const {
    const Vec5 k1 = rhs(y);
    const Vec5 k2 = rhs(y + 0.5 * h * k1);
    const Vec5 k3 = rhs(y + 0.5 * h * k2);
    const Vec5 k4 = rhs(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  void tangent_step(Vec5& y, Vec5& d, double h) const {
    const Vec5 k1 = rhs(y);
    const Vec5 l1 = tangent_rhs(y, d);
    const Vec5 y2 = y + 0.5 * h * k1;
    const Vec5 d2 = d + 0.5 * h * l1;
    const Vec5 k2 = rhs(y2);
    const Vec5 l2 = tangent_rhs(y2, d2);
    const Vec5 y3 = y + 0.5 * h * k2;
    const Vec5 d3 = d + 0.5 * h * l2;
    const Vec5 k3 = rhs(y3);
    const Vec5 l3 = tangent_rhs(y3, d3);
    const Vec5 y4 = y + h * k3;
    const Vec5 d4 = d + h * l3;
    const Vec5 k4 = rhs(y4);
    const Vec5 l4 = tangent_rhs(y4, d4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    d += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
  }
};

void rk4_step(const ModelSpec& model, PhasePoint& x, double h) {
  const JcSpin spin(model);
  Vec5 y = spin.to_spin(x);
  spin.step(y, h);
  x = spin.from_spin(y);
}

void require_step_args(const ModelSpec& model, const PhasePoint& x0, double dt, double t_max) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("integration step must be positive");
  if (!(t_max >= dt) || !std::isfinite(t_max)) throw InputError("t_max must be at least one step");
  if (!model.in_domain(x0)) throw DomainError("initial point lies outside the model domain");
}

long long step_count(double dt, double t_max) { return std::llround(t_max / dt); }

void check_drift(const ModelSpec& model, const PhasePoint& x, double energy0, double budget, double t,
                 double* worst = nullptr) {
  const double drift = relative_drift(model, x, energy0);
  if (worst && drift > *worst) *worst = drift;
  if (!(drift <= budget)) {
    std::ostringstream msg;
    msg << "relative energy drift " << drift << " exceeds budget " << budget << " at t = " << t;
    throw IntegrationError(msg.str());
  }
}

}  // namespace

std::vector<double> Trajectory::series(Observable which) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& x : samples) out.push_back(which == Observable::Q1 ? x.q1 : x.q2);
  return out;
}

double relative_drift(const ModelSpec& model, const PhasePoint& x, double energy0) {
  const double scale = energy0 != 0.0 ? std::abs(energy0) : 1.0;
  return std::abs(energy(model, x) - energy0) / scale;
}

void step(const ModelSpec& model, PhasePoint& x, double h) {
  if (model.kind() == ModelKind::PullenEdmonds) {
    yoshida_step(pe_force(model), x, h);
  } else {
    rk4_step(model, x, h);
  }
}

Trajectory integrate(const ModelSpec& model, const PhasePoint& x0, double dt, double t_max,
                     int sample_stride, double drift_budget) {
  require_step_args(model, x0, dt, t_max);
  if (sample_stride < 1) throw InputError("sample stride must be >= 1");

  Trajectory traj{model, dt, sample_stride, {}, energy(model, x0), drift_budget, 0.0};
  const long long steps = step_count(dt, t_max);
  traj.samples.reserve(static_cast<std::size_t>(steps / sample_stride + 1));
  traj.samples.push_back(x0);

  const bool pe = model.kind() == ModelKind::PullenEdmonds;
  const PeForce force = pe ? pe_force(model) : PeForce{};
  std::optional<JcSpin> spin;
  Vec5 y = Vec5::Zero();
  if (!pe) {
    spin.emplace(model);
    y = spin->to_spin(x0);
  }
  PhasePoint x = x0;
  for (long long n = 1; n <= steps; ++n) {
    if (pe) {
      yoshida_step(force, x, dt);
    } else {
      spin->step(y, dt);
    }
    if (n % sample_stride == 0) {
      if (!pe) x = spin->from_spin(y);
      check_drift(model, x, traj.energy0, drift_budget, static_cast<double>(n) * dt, &traj.max_drift);
      traj.samples.push_back(x);
    }
  }
  return traj;
}

SectionPoints poincare_section(const ModelSpec& model, const PhasePoint& x0, const SectionCondition& cond,
                               double t_max, double dt, double drift_budget) {
  require_step_args(model, x0, dt, t_max);
  if (!std::isfinite(cond.value)) throw InputError("section value must be finite");

  const double energy0 = energy(model, x0);
  const long long steps = step_count(dt, t_max);
  // drift is checked on this cadence rather than every step
  const long long check_every = std::max<long long>(1, std::llround(1.0 / dt));

  SectionPoints out;
  PhasePoint x = x0;
  double g_prev = x.q2 - cond.value;
  for (long long n = 0; n < steps; ++n) {
    PhasePoint next = x;
    step(model, next, dt);
    const double g_next = next.q2 - cond.value;

    if ((g_prev < 0.0) != (g_next < 0.0)) {
      // Illinois-safeguarded secant on the sub-step length s in [0, dt].
      double s_lo = 0.0;
      double s_hi = dt;
      double g_lo = g_prev;
      double g_hi = g_next;
      double s = dt;
      PhasePoint hit = next;
      double g = g_next;
      int side = 0;
      for (int iter = 0; iter < 60 && std::abs(g) >= 0.1 * kSectionTolerance; ++iter) {
        s = s_hi - g_hi * (s_hi - s_lo) / (g_hi - g_lo);
        if (!(s > s_lo && s < s_hi)) s = 0.5 * (s_lo + s_hi);
        hit = x;
        if (s > 0.0) step(model, hit, s);
        g = hit.q2 - cond.value;
        if ((g < 0.0) == (g_lo < 0.0)) {
          s_lo = s;
          g_lo = g;
          if (side == -1) g_hi *= 0.5;
          side = -1;
        } else {
          s_hi = s;
          g_hi = g;
          if (side == 1) g_lo *= 0.5;
          side = 1;
        }
      }
      if (std::abs(g) < kSectionTolerance && hit.p2 > 0.0) {
        out.points.emplace_back(hit.q1, hit.p1);
        out.crossing_times.push_back(static_cast<double>(n) * dt + s);
      }
    }

    x = next;
    g_prev = g_next;
    if ((n + 1) % check_every == 0) check_drift(model, x, energy0, drift_budget, static_cast<double>(n + 1) * dt);
  }
  return out;
}

double lyapunov_max(const ModelSpec& model, const PhasePoint& x0, double t_max, double dt,
                    double renorm_interval, std::optional<Vec4> tangent0, double drift_budget) {
  require_step_args(model, x0, dt, t_max);
  if (!(renorm_interval >= dt)) throw InputError("renormalization interval must be >= dt");

  Vec4 d = tangent0.value_or(Vec4(1.0, 1.0, 1.0, 1.0));
  if (!(d.norm() > 0.0)) throw InputError("initial tangent vector must be non-zero");
  d.normalize();

  const double energy0 = energy(model, x0);
  const long long steps = step_count(dt, t_max);
  const long long renorm_every = std::max<long long>(1, std::llround(renorm_interval / dt));
  const bool pe = model.kind() == ModelKind::PullenEdmonds;
  const PeForce force = pe ? pe_force(model) : PeForce{};

  // JC carries its tangent in the spin variables.
  std::optional<JcSpin> spin;
  Vec5 y = Vec5::Zero();
  Vec5 dy = Vec5::Zero();
  if (!pe) {
    spin.emplace(model);
    y = spin->to_spin(x0);
    Vec5 d5 = Vec5::Zero();
    d5.head<4>() = d;
    dy = spin->chart_jacobian(x0) * d5;
    if (!(dy.norm() > 0.0)) throw InputError("initial tangent vector vanishes in the spin chart");
    dy.normalize();
  }

  PhasePoint x = x0;
  double log_sum = 0.0;
  for (long long n = 1; n <= steps; ++n) {
    if (pe) {
      yoshida_tangent_step(force, x, d, dt);
    } else {
      spin->tangent_step(y, dy, dt);
    }
    if (n % renorm_every == 0 || n == steps) {
      if (pe) {
        const double r = d.norm();
        log_sum += std::log(r);
        d /= r;
      } else {
        const double r = dy.norm();
        log_sum += std::log(r);
        dy /= r;
        x = spin->from_spin(y);
      }
      check_drift(model, x, energy0, drift_budget, static_cast<double>(n) * dt);
    }
  }
  return log_sum / (static_cast<double>(steps) * dt);
}

}  // namespace qcc
