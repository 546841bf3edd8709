#include "qcc/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcc/errors.hpp"

namespace qcc {

namespace {

// Symplectic matrix mapping the gradient onto the phase velocity for the
// ordering (q1, p1, q2, p2).
Vec4 apply_symplectic(const Vec4& grad) { return {grad[1], -grad[0], grad[3], -grad[2]}; }

void require_domain(const ModelSpec& model, const PhasePoint& x) {
  if (!x.finite()) {
    throw DomainError("phase point has non-finite components");
  }
  if (!model.in_domain(x)) {
    std::ostringstream msg;
    msg << "phase point outside the atomic coherent-state domain: q1^2 + p1^2 = "
        << x.q1 * x.q1 + x.p1 * x.p1 << " >= 4J = " << 4.0 * model.jc().J;
    throw DomainError(msg.str());
  }
}

// Jaynes-Cummings pieces: s = sqrt(1 - r^2/4J) multiplies the coupling
// C = G+ p1 p2 + G- q1 q2.
struct JcTerms {
  double a;  // 1/4J
  double s;
  double gp;  // G + G'
  double gm;  // G - G'
};

JcTerms jc_terms(const JaynesCummingsParams& p, const PhasePoint& x) {
  JcTerms t{};
  t.a = 1.0 / (4.0 * p.J);
  t.s = std::sqrt(std::max(0.0, 1.0 - t.a * (x.q1 * x.q1 + x.p1 * x.p1)));
  t.gp = p.G + p.Gprime;
  t.gm = p.G - p.Gprime;
  return t;
}

Eigen::Matrix4d energy_hessian(const ModelSpec& model, const PhasePoint& x) {
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  if (model.kind() == ModelKind::PullenEdmonds) {
    const auto& p = model.pe();
    const double k = p.m * p.omega * p.omega;
    h(0, 0) = k + 2.0 * p.lambda * x.q2 * x.q2;
    h(2, 2) = k + 2.0 * p.lambda * x.q1 * x.q1;
    h(0, 2) = h(2, 0) = 4.0 * p.lambda * x.q1 * x.q2;
    h(1, 1) = h(3, 3) = 1.0 / p.m;
    return h;
  }
  const auto& p = model.jc();
  const JcTerms t = jc_terms(p, x);
  const double s = t.s;
  const double s3 = s * s * s;
  const double c = t.gp * x.p1 * x.p2 + t.gm * x.q1 * x.q2;
  const double s_q = -t.a * x.q1 / s;
  const double s_p = -t.a * x.p1 / s;
  const double s_qq = -t.a / s - t.a * t.a * x.q1 * x.q1 / s3;
  const double s_pp = -t.a / s - t.a * t.a * x.p1 * x.p1 / s3;
  const double s_qp = -t.a * t.a * x.q1 * x.p1 / s3;
  // index order: 0=q1, 1=p1, 2=q2, 3=p2
  h(0, 0) = p.epsilon + s_qq * c + 2.0 * s_q * t.gm * x.q2;
  h(1, 1) = p.epsilon + s_pp * c + 2.0 * s_p * t.gp * x.p2;
  h(0, 1) = h(1, 0) = s_qp * c + s_q * t.gp * x.p2 + s_p * t.gm * x.q2;
  h(0, 2) = h(2, 0) = s_q * t.gm * x.q1 + s * t.gm;
  h(0, 3) = h(3, 0) = s_q * t.gp * x.p1;
  h(1, 2) = h(2, 1) = s_p * t.gm * x.q1;
  h(1, 3) = h(3, 1) = s_p * t.gp * x.p1 + s * t.gp;
  h(2, 2) = p.omega;
  h(3, 3) = p.omega;
  return h;
}

}  // namespace

bool PhasePoint::finite() const {
  return std::isfinite(q1) && std::isfinite(p1) && std::isfinite(q2) && std::isfinite(p2);
}

std::string to_string(ModelKind kind) {
  return kind == ModelKind::PullenEdmonds ? "pullen-edmonds" : "jaynes-cummings";
}

ModelSpec ModelSpec::pullen_edmonds(PullenEdmondsParams params) {
  if (!(params.m > 0.0) || !(params.omega > 0.0) || !std::isfinite(params.lambda)) {
    throw InputError("Pullen-Edmonds model needs m > 0, omega > 0 and finite lambda");
  }
  return ModelSpec(params);
}

ModelSpec ModelSpec::jaynes_cummings(JaynesCummingsParams params) {
  const double twice_j = 2.0 * params.J;
  if (!(params.J > 0.0) || std::abs(twice_j - std::round(twice_j)) > 1e-12) {
    throw InputError("Jaynes-Cummings model needs J to be a positive half-integer");
  }
  if (!(params.omega > 0.0) || !std::isfinite(params.epsilon) || !std::isfinite(params.G) ||
      !std::isfinite(params.Gprime)) {
    throw InputError("Jaynes-Cummings model needs omega > 0 and finite couplings");
  }
  params.J = std::round(twice_j) / 2.0;
  return ModelSpec(params);
}

ModelKind ModelSpec::kind() const {
  return std::holds_alternative<PullenEdmondsParams>(params_) ? ModelKind::PullenEdmonds
                                                               : ModelKind::JaynesCummings;
}

const PullenEdmondsParams& ModelSpec::pe() const {
  if (const auto* p = std::get_if<PullenEdmondsParams>(&params_)) return *p;
  throw InputError("model is not Pullen-Edmonds");
}

const JaynesCummingsParams& ModelSpec::jc() const {
  if (const auto* p = std::get_if<JaynesCummingsParams>(&params_)) return *p;
  throw InputError("model is not Jaynes-Cummings");
}

bool ModelSpec::in_domain(const PhasePoint& x) const {
  if (kind() == ModelKind::PullenEdmonds) return x.finite();
  return x.finite() && x.q1 * x.q1 + x.p1 * x.p1 < 4.0 * jc().J;
}

std::string ModelSpec::describe() const {
  std::ostringstream out;
  if (kind() == ModelKind::PullenEdmonds) {
    const auto& p = pe();
    out << "pullen-edmonds(m=" << p.m << ", omega=" << p.omega << ", lambda=" << p.lambda << ")";
  } else {
    const auto& p = jc();
    out << "jaynes-cummings(omega=" << p.omega << ", epsilon=" << p.epsilon << ", G=" << p.G
        << ", G'=" << p.Gprime << ", J=" << p.J << ")";
  }
  return out.str();
}

double energy(const ModelSpec& model, const PhasePoint& x) {
  require_domain(model, x);
  if (model.kind() == ModelKind::PullenEdmonds) {
    const auto& p = model.pe();
    const double k = p.m * p.omega * p.omega;
    return (x.p1 * x.p1 + x.p2 * x.p2) / (2.0 * p.m) + 0.5 * k * (x.q1 * x.q1 + x.q2 * x.q2) +
           p.lambda * x.q1 * x.q1 * x.q2 * x.q2;
  }
  const auto& p = model.jc();
  const JcTerms t = jc_terms(p, x);
  return 0.5 * p.omega * (x.q2 * x.q2 + x.p2 * x.p2) +
         0.5 * p.epsilon * (x.q1 * x.q1 + x.p1 * x.p1 - 2.0 * p.J) +
         t.s * (t.gp * x.p1 * x.p2 + t.gm * x.q1 * x.q2);
}

Vec4 energy_gradient(const ModelSpec& model, const PhasePoint& x) {
  require_domain(model, x);
  if (model.kind() == ModelKind::PullenEdmonds) {
    const auto& p = model.pe();
    const double k = p.m * p.omega * p.omega;
    return {k * x.q1 + 2.0 * p.lambda * x.q1 * x.q2 * x.q2, x.p1 / p.m,
            k * x.q2 + 2.0 * p.lambda * x.q2 * x.q1 * x.q1, x.p2 / p.m};
  }
  const auto& p = model.jc();
  const JcTerms t = jc_terms(p, x);
  const double c = t.gp * x.p1 * x.p2 + t.gm * x.q1 * x.q2;
  const double s_q = -t.a * x.q1 / t.s;
  const double s_p = -t.a * x.p1 / t.s;
  return {p.epsilon * x.q1 + s_q * c + t.s * t.gm * x.q2,
          p.epsilon * x.p1 + s_p * c + t.s * t.gp * x.p2,
          p.omega * x.q2 + t.s * t.gm * x.q1,
          p.omega * x.p2 + t.s * t.gp * x.p1};
}

Vec4 flow(const ModelSpec& model, const PhasePoint& x) {
  return apply_symplectic(energy_gradient(model, x));
}

Mat4 flow_jacobian(const ModelSpec& model, const PhasePoint& x) {
  require_domain(model, x);
  const Eigen::Matrix4d h = energy_hessian(model, x);
  Mat4 jac;
  for (int col = 0; col < 4; ++col) {
    jac.col(col) = apply_symplectic(h.col(col));
  }
  return jac;
}

double solve_p2(const ModelSpec& model, double q1, double p1, double q2, double E) {
  const PhasePoint base{q1, p1, q2, 0.0};
  require_domain(model, base);
  if (!std::isfinite(E)) throw InfeasibleEnergyError("energy must be finite");

  if (model.kind() == ModelKind::PullenEdmonds) {
    const auto& p = model.pe();
    const double rest = energy(model, base);
    const double p2_sq = 2.0 * p.m * (E - rest);
    if (!(p2_sq > 0.0)) {
      std::ostringstream msg;
      msg << "energy " << E << " is not above the p2 = 0 energy " << rest;
      throw InfeasibleEnergyError(msg.str());
    }
    return std::sqrt(p2_sq);
  }

  // (w/2) p2^2 + b p2 + c = 0 with b = s G+ p1 and c = H(p2 = 0) - E.
  const auto& p = model.jc();
  const JcTerms t = jc_terms(p, base);
  const double a = 0.5 * p.omega;
  const double b = t.s * t.gp * p1;
  const double c = energy(model, base) - E;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    throw InfeasibleEnergyError("no real p2 reproduces the requested energy");
  }
  const double sq = std::sqrt(disc);
  // larger root, written to avoid cancellation
  const double root = b <= 0.0 ? (-b + sq) / (2.0 * a) : (2.0 * c) / (-b - sq);
  if (!(root > 0.0)) {
    throw InfeasibleEnergyError("no positive p2 reproduces the requested energy");
  }
  return root;
}

}  // namespace qcc
