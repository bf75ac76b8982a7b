// prep.cpp — Bell-state targets and the two-pulse preparation search.
#include "epr/prep.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace epr {

namespace {

constexpr double kFidelityGate = 1.0 - 1e-9;

}  // namespace

std::string to_string(BellLabel label) {
  switch (label) {
    case BellLabel::psi_plus: return "psi_plus";
    case BellLabel::psi_minus: return "psi_minus";
    case BellLabel::phi_plus: return "phi_plus";
    case BellLabel::phi_minus: return "phi_minus";
  }
  throw std::invalid_argument("unknown Bell label");
}

BellLabel bell_label_from_string(const std::string& name) {
  if (name == "psi_plus") return BellLabel::psi_plus;
  if (name == "psi_minus") return BellLabel::psi_minus;
  if (name == "phi_plus") return BellLabel::phi_plus;
  if (name == "phi_minus") return BellLabel::phi_minus;
  throw std::invalid_argument("unknown Bell label: " + name);
}

Vec4 bell_state(BellLabel label) {
  const double r = 1.0 / std::sqrt(2.0);
  Vec4 v = Vec4::Zero();
  switch (label) {
    case BellLabel::psi_plus:
      v(0) = r; v(3) = r;
      break;
    case BellLabel::psi_minus:
      v(0) = r; v(3) = -r;
      break;
    case BellLabel::phi_plus:
      v(1) = r; v(2) = r;
      break;
    case BellLabel::phi_minus:
      v(1) = r; v(2) = -r;
      break;
  }
  return v;
}

Vec4 ground_state() { return basis_state(0, 0); }

Mat4 density(const Vec4& psi) { return psi * psi.adjoint(); }

double state_fidelity(const Mat4& rho_a, const Mat4& rho_b) {
  if (!is_hermitian(rho_a) || !is_hermitian(rho_b))
    throw std::invalid_argument("state_fidelity: inputs must be Hermitian");
  return (rho_a * rho_b).trace().real();
}

double state_fidelity(const Vec4& a, const Vec4& b) {
  return std::norm(a.dot(b));
}

Mat4 PulseSequence::total() const {
  Mat4 u = Mat4::Identity();
  for (const PulseStep& step : steps) u = step.gate.propagator.matrix * u;
  return u;
}

BellPreparation prepare_bell(BellLabel target, double e12_uev) {
  if (e12_uev <= 0.0)
    throw std::invalid_argument("prepare_bell: e12_uev must be positive");

  const bool phi_family =
      target == BellLabel::phi_plus || target == BellLabel::phi_minus;
  const int sign2 = phi_family ? -1 : +1;
  const double pi = std::numbers::pi;
  const Vec4 want = bell_state(target);

  // sin(theta1) = +-1/sqrt(2) candidates, ordered by magnitude.
  const double candidates[] = {pi / 4, 3 * pi / 4, 5 * pi / 4, 7 * pi / 4};

  for (double theta1 : candidates) {
    ConditionalGate g1 = u_conditional(1, -1, theta1, e12_uev);
    ConditionalGate g2 = u_conditional(2, sign2, pi / 2, e12_uev);
    Vec4 out = g2.propagator.matrix * (g1.propagator.matrix * ground_state());
    const double f = state_fidelity(out, want);
    if (f >= kFidelityGate) {
      BellPreparation prep;
      prep.sequence.target = target;
      prep.sequence.steps = {PulseStep{g1}, PulseStep{g2}};
      prep.state = out;
      prep.fidelity = f;
      return prep;
    }
  }
  throw std::runtime_error("prepare_bell: no two-pulse sequence reached " +
                           to_string(target));
}

}  // namespace epr
