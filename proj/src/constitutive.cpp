#include "cfem/constitutive.hpp"

#include <cmath>
#include <sstream>

namespace cfem {

void StrainLimitParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be non-negative");
}

double SymTensor2::norm() const { return std::sqrt(t11 * t11 + 2.0 * t12 * t12 + t22 * t22); }

double contract(const SymTensor2& a, const SymTensor2& b) {
  return a.t11 * b.t11 + 2.0 * a.t12 * b.t12 + a.t22 * b.t22;
}

SymTensor2 rotate(const SymTensor2& a, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  // R A R^T with R = [c -s; s c]
  const double r11 = c * c * a.t11 - 2.0 * c * s * a.t12 + s * s * a.t22;
  const double r22 = s * s * a.t11 + 2.0 * c * s * a.t12 + c * c * a.t22;
  const double r12 = c * s * (a.t11 - a.t22) + (c * c - s * s) * a.t12;
  return {r11, r12, r22};
}

double phi(double s, const StrainLimitParams& p) {
  const double bs = p.beta * s;
  if (bs <= 0.0) return 1.0;
  if (bs >= 1.0) {
    std::ostringstream msg;
    msg << "strain limit reached: beta*s = " << bs;
    throw StrainLimitError(msg.str(), bs);
  }
  return 1.0 / std::pow(1.0 - std::pow(bs, p.alpha), 1.0 / p.alpha);
}

double bounded_factor(double s, const StrainLimitParams& p) {
  const double bs = p.beta * s;
  if (bs <= 0.0) return 1.0;
  return 1.0 / std::pow(1.0 + std::pow(bs, p.alpha), 1.0 / p.alpha);
}

SymTensor2 strain_from_stress(const SymTensor2& t, const StrainLimitParams& p) {
  return t * bounded_factor(t.norm(), p);
}

SymTensor2 stress_from_strain(const SymTensor2& e, const StrainLimitParams& p) {
  return e * phi(e.norm(), p);
}

AntiPlaneStrain anti_plane_strain(const Vec2& grad_w) {
  AntiPlaneStrain e;
  e.e13 = 0.5 * grad_w.x();
  e.e23 = 0.5 * grad_w.y();
  e.norm = grad_w.norm() / std::sqrt(2.0);
  return e;
}

}  // namespace cfem
