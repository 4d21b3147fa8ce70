#include "kinetic/frame_transform.hpp"

#include <cmath>
#include <stdexcept>

namespace kinetic {

namespace {
void require_scale(double S, const char* where) {
  if (!(S > 0.0))
    throw std::invalid_argument(std::string(where) + ": scale must be > 0");
}
}  // namespace

MacroscopicState physical_moments(const MacroscopicState& standard,
                                  const Eigen::Vector3d& V, double S) {
  require_scale(S, "physical_moments");
  const double sqrtS = std::sqrt(S);
  const double s32 = S * sqrtS;

  MacroscopicState out;
  out.rho = s32 * standard.rho;
  out.V = sqrtS * standard.V + V;
  out.P = s32 * S * standard.P;
  out.p = out.P.trace() / 3.0;
  out.T = out.p / out.rho;
  out.E = s32 * (S * standard.E + sqrtS * standard.rho * V.dot(standard.V) +
                 0.5 * V.squaredNorm() * standard.rho);

  // Raw half third moment: expand |sqrt(S) v + V|^2 (sqrt(S) v + V) and
  // integrate term by term against the standardized distribution.
  const Eigen::Matrix3d R =
      standard.P + standard.rho * standard.V * standard.V.transpose();
  out.q = s32 * (s32 * standard.q + S * standard.E * V + S * R * V +
                 sqrtS * standard.rho * V.dot(standard.V) * V +
                 0.5 * sqrtS * V.squaredNorm() * standard.rho * standard.V +
                 0.5 * V.squaredNorm() * standard.rho * V);
  return out;
}

MacroscopicState standardized_moments(const MacroscopicState& physical,
                                      const Eigen::Vector3d& V, double S) {
  require_scale(S, "standardized_moments");
  // The inverse substitution is itself a frame map with shift -V/sqrt(S)
  // and scale 1/S.
  return physical_moments(physical, -V / std::sqrt(S), 1.0 / S);
}

double collision_scaling(double S, double beta) {
  require_scale(S, "collision_scaling");
  if (beta < 0.0)
    throw std::invalid_argument("collision_scaling: beta must be >= 0");
  return std::pow(S, 3.0 + 0.5 * beta);
}

double mass_factor(double S) {
  require_scale(S, "mass_factor");
  return S * std::sqrt(S);
}

Eigen::VectorXd reframe_nodal(const VelocityBasis& basis,
                              const Eigen::VectorXd& coeffs,
                              const Eigen::Vector3d& V_old, double S_old,
                              const Eigen::Vector3d& V_new, double S_new) {
  require_scale(S_old, "reframe_nodal");
  require_scale(S_new, "reframe_nodal");
  const double sqrt_new = std::sqrt(S_new);
  const double inv_sqrt_old = 1.0 / std::sqrt(S_old);
  Eigen::VectorXd out(basis.size());
  for (int m = 0; m < basis.size(); ++m) {
    const Eigen::Vector3d v = basis.node(m);
    const Eigen::Vector3d w = (sqrt_new * v + V_new - V_old) * inv_sqrt_old;
    out[m] = basis.evaluate_poly(coeffs, w) *
             std::exp(v.squaredNorm() - w.squaredNorm());
  }
  return out;
}

}  // namespace kinetic
