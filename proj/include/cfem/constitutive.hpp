#pragma once

// Strain-limiting constitutive maps.
//
//   Phi(s)  = 1 / (1 - (beta s)^alpha)^(1/alpha)      stress from strain, T = Phi(|e|) e
//   F(T)    = T / (1 + (beta |T|)^alpha)^(1/alpha)    strain from stress, |F(T)| < 1/beta

#include "cfem/common.hpp"

namespace cfem {

struct StrainLimitParams {
  double alpha = 1.0;
  double beta = 1.0;

  /// Throws ConfigError unless alpha > 0 and beta >= 0.
  void validate() const;
};

/// Symmetric 2x2 tensor stored by its three independent components.
struct SymTensor2 {
  double t11 = 0.0;
  double t12 = 0.0;
  double t22 = 0.0;

  double norm() const;  // Frobenius
  SymTensor2 operator+(const SymTensor2& o) const { return {t11 + o.t11, t12 + o.t12, t22 + o.t22}; }
  SymTensor2 operator-(const SymTensor2& o) const { return {t11 - o.t11, t12 - o.t12, t22 - o.t22}; }
  SymTensor2 operator*(double s) const { return {s * t11, s * t12, s * t22}; }
};

/// Full contraction A : B.
double contract(const SymTensor2& a, const SymTensor2& b);

/// R A R^T for the rotation by angle theta.
SymTensor2 rotate(const SymTensor2& a, double theta);

/// Throws StrainLimitError when beta * s >= 1.
double phi(double s, const StrainLimitParams& p);

/// Scalar factor of F: 1 / (1 + (beta s)^alpha)^(1/alpha).
double bounded_factor(double s, const StrainLimitParams& p);

SymTensor2 strain_from_stress(const SymTensor2& t, const StrainLimitParams& p);
SymTensor2 stress_from_strain(const SymTensor2& e, const StrainLimitParams& p);

/// Strain of the displacement (0, 0, w): e13 = w_x / 2, e23 = w_y / 2.
struct AntiPlaneStrain {
  double e13 = 0.0;
  double e23 = 0.0;
  double norm = 0.0;  // Frobenius norm of the full 3x3 tensor, |grad w| / sqrt(2)
};

AntiPlaneStrain anti_plane_strain(const Vec2& grad_w);

}  // namespace cfem
