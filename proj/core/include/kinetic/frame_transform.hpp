#pragma once

#include <Eigen/Dense>

#include "kinetic/velocity_basis.hpp"

namespace kinetic {

// Change of variables between a distribution f and its standardized form
// f_s(v) = f(sqrt(S) v + V) for a frame shift V and scale S > 0. All maps
// below are exact algebra (substitution u = sqrt(S) v + V), so composing a
// map with its inverse is the identity up to roundoff.

/// Moments of f from the moments of its standardized form:
/// rho = S^{3/2} rho_s, V_f = sqrt(S) V_s + V, T_f = S T_s, P = S^{5/2} P_s,
/// with E and q transformed consistently (q is the raw half third moment).
MacroscopicState physical_moments(const MacroscopicState& standard,
                                  const Eigen::Vector3d& V, double S);

/// Moments of the standardized form from the moments of f:
/// rho_s = S^{-3/2} rho, V_s = (V_f - V)/sqrt(S), T_s = T_f / S.
MacroscopicState standardized_moments(const MacroscopicState& physical,
                                      const Eigen::Vector3d& V, double S);

/// Weak-form scaling of the collision operator for a VHS kernel with
/// exponent beta: integral Q(f) phi dv = S^{3 + beta/2} * the standardized
/// integral.
double collision_scaling(double S, double beta);

/// Scaling of plain mass-type integrals: integral f phi dv = S^{3/2} * the
/// standardized integral.
double mass_factor(double S);

/// Transport velocity of the standardized unknown: flux integrands carry
/// sqrt(S) v + V in place of v.
inline Eigen::Vector3d transformed_velocity(const Eigen::Vector3d& v,
                                            const Eigen::Vector3d& V,
                                            double S) {
  return std::sqrt(S) * v + V;
}

/// Nodal coefficients of the same physical distribution expressed in a new
/// frame: g_new[m] = g_old(w_m) * exp(|v_m|^2 - |w_m|^2) with
/// w_m = (sqrt(S_new) v_m + V_new - V_old)/sqrt(S_old). Exact where the old
/// representation is exact; otherwise limited by interpolation.
Eigen::VectorXd reframe_nodal(const VelocityBasis& basis,
                              const Eigen::VectorXd& coeffs,
                              const Eigen::Vector3d& V_old, double S_old,
                              const Eigen::Vector3d& V_new, double S_new);

}  // namespace kinetic
