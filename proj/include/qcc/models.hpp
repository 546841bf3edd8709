#pragma once

// Classical side of the two coupled-oscillator models: the Pullen-Edmonds
// pair of quartic-coupled oscillators and the classical limit of the
// generalized Jaynes-Cummings Hamiltonian obtained from atomic/field
// coherent-state expectation values.

#include <string>
#include <variant>

#include <Eigen/Core>

namespace qcc {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Point (q1, p1, q2, p2) of the four-dimensional phase space, natural units.
struct PhasePoint {
  double q1 = 0.0;
  double p1 = 0.0;
  double q2 = 0.0;
  double p2 = 0.0;

  Vec4 as_vector() const { return {q1, p1, q2, p2}; }
  static PhasePoint from_vector(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
  bool finite() const;
};

enum class ModelKind { PullenEdmonds, JaynesCummings };

std::string to_string(ModelKind kind);

/// H = p1^2/2m + p2^2/2m + m w^2 (q1^2 + q2^2)/2 + lambda q1^2 q2^2
struct PullenEdmondsParams {
  double m = 1.0;
  double omega = 1.0;
  double lambda = 0.0075;
};

/// H = w a^dag a + eps Jz + G/sqrt(2J) (a J+ + a^dag J-) + G'/sqrt(2J) (a^dag J+ + a J-)
struct JaynesCummingsParams {
  double omega = 1.0;
  double epsilon = 1.0;
  double G = 0.25;
  double Gprime = 0.0;
  double J = 29.0;  // positive half-integer, 2J two-level atoms
};

/// Validated parameter bundle; exactly one of the two parameter sets is active.
class ModelSpec {
 public:
  static ModelSpec pullen_edmonds(PullenEdmondsParams params = {});
  static ModelSpec jaynes_cummings(JaynesCummingsParams params = {});

  ModelKind kind() const;
  const PullenEdmondsParams& pe() const;
  const JaynesCummingsParams& jc() const;

  /// JC requires q1^2 + p1^2 < 4J; PE accepts every finite point.
  bool in_domain(const PhasePoint& x) const;

  std::string describe() const;

 private:
  using Params = std::variant<PullenEdmondsParams, JaynesCummingsParams>;
  explicit ModelSpec(Params params) : params_(params) {}
  Params params_;
};

/// Classical energy H(q1, p1; q2, p2).
double energy(const ModelSpec& model, const PhasePoint& x);

/// Gradient (dH/dq1, dH/dp1, dH/dq2, dH/dp2).
Vec4 energy_gradient(const ModelSpec& model, const PhasePoint& x);

/// Hamilton's equations: (dH/dp1, -dH/dq1, dH/dp2, -dH/dq2).
Vec4 flow(const ModelSpec& model, const PhasePoint& x);

/// d(flow)/d(q1, p1, q2, p2), analytic.
Mat4 flow_jacobian(const ModelSpec& model, const PhasePoint& x);

/// The p2 > 0 with energy(model, {q1, p1, q2, p2}) == E.
/// Throws InfeasibleEnergyError when no positive root exists.
double solve_p2(const ModelSpec& model, double q1, double p1, double q2, double E);

}  // namespace qcc
