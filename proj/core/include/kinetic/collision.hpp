#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "kinetic/quadrature.hpp"
#include "kinetic/velocity_basis.hpp"

namespace kinetic {

/// Quadrature on the unit sphere: Gauss-Legendre in the polar cosine times an
/// equispaced trapezoid rule in azimuth. Exact for spherical polynomials up
/// to the requested degree, antipodally symmetric, weights summing to 4 pi.
struct SphereRule {
  std::vector<Eigen::Vector3d> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(weights.size()); }
};

SphereRule sphere_quadrature(int degree);

/// Post-collision velocities for scattering direction sigma:
/// v' = (v+w)/2 + |v-w| sigma/2 and w' = (v+w)/2 - |v-w| sigma/2.
std::pair<Eigen::Vector3d, Eigen::Vector3d> scattered_pair(
    const Eigen::Vector3d& v, const Eigen::Vector3d& w,
    const Eigen::Vector3d& sigma);

struct CollisionOptions {
  /// Gauss-Hermite points per direction for the six-dimensional pair
  /// integral; 0 selects 2(N+1). Must be at least N+1.
  int quad_points_1d = 0;
  /// Spherical rule degree; 0 selects max(6, 3N), which integrates the gain
  /// term exactly for every polynomial of the trial space.
  int sphere_degree = 0;
  /// Relative-speed exponent of the kernel magnitude |v - w|^beta, in [0, 1].
  double beta = 0.0;
  /// Angular factor b(cos chi), chi the deflection angle; empty means b = 1.
  std::function<double(double)> angular;
  /// Refuse to precompute an application matrix larger than this.
  std::size_t max_matrix_bytes = std::size_t{1} << 31;
};

/// Binary collision operator in weak form. For f = exp(-|v|^2) g the entries
///
///   Q_m = int int int |v-w|^beta b(cos chi) e^{-|v|^2-|w|^2} g(v) g(w)
///                     [L_m(v') - L_m(v)] dsigma dw dv
///
/// are evaluated after the rotation v = (s+t)/sqrt(2), w = (s-t)/sqrt(2) with
/// tensor Gauss-Hermite rules in s and t and a spherical rule in sigma. The
/// pair products g(v) g(w) live on a tensor grid of per-direction sum points
/// (s_i + t_j)/sqrt(2), so the whole sum collapses to one matrix-vector
/// product once the pair-independent bracket matrix has been precomputed.
class BoltzmannOperator {
 public:
  /// The basis must outlive the operator.
  explicit BoltzmannOperator(const VelocityBasis& basis,
                             CollisionOptions opts = {});

  int quad_points_1d() const { return nq_; }
  double beta() const { return opts_.beta; }
  const SphereRule& sphere() const { return sphere_; }

  /// Bytes the precomputed bracket matrix would occupy.
  std::size_t matrix_bytes() const;
  bool has_matrix() const { return K_.size() > 0; }
  /// Precompute the bracket matrix (one column per quadrature pair). Throws
  /// std::length_error if it would exceed max_matrix_bytes.
  void build_matrix();

  /// Fast path: bracket matrix times the pair-product vector. Requires
  /// build_matrix() to have been called.
  Eigen::VectorXd apply(const Eigen::VectorXd& g) const;
  /// Matrix-free evaluation of the same sum; used for cross-checks and for
  /// orders where the matrix would be too large.
  Eigen::VectorXd apply_direct(const Eigen::VectorXd& g) const;

 private:
  void accumulate_bracket(const Eigen::Vector3d& vbar,
                          const Eigen::Vector3d& vhat, int p1, int p2, int p3,
                          double coeff, double* out) const;
  Eigen::VectorXd interpolate_pair_grid(const Eigen::VectorXd& g) const;
  Eigen::VectorXd pair_products(const Eigen::VectorXd& g) const;

  const VelocityBasis* basis_;
  CollisionOptions opts_;
  int nq_ = 0;
  SphereRule sphere_;
  double sphere_total_ = 0.0;
  Quad1D gh_;
  std::vector<double> pair_x_;  // (x_i + x_j)/sqrt(2), i major
  std::vector<int> flip_;       // pair index of (x_i - x_j)/sqrt(2)
  Eigen::MatrixXd card_;        // n1d x nq^2 cardinal values on pair_x_
  Eigen::MatrixXd K_;           // ndof x nq^6 bracket matrix (when built)
};

/// Projects the five collision invariants {1, v, |v|^2} out of a weak-form
/// collision vector: the returned Q' has sum_m psi_k(v_m) Q'_m = 0 and is the
/// closest such vector in the inverse-mass norm. Requires order >= 2 so the
/// invariants are linearly independent on the node set.
class ConservationFix {
 public:
  explicit ConservationFix(const VelocityBasis& basis);

  /// sum_m psi_k(v_m) Q_m for psi = {1, v_1, v_2, v_3, |v|^2}.
  Eigen::Matrix<double, 5, 1> invariants(const Eigen::VectorXd& Q) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& Q) const;

 private:
  Eigen::MatrixXd psi_;     // 5 x ndof
  Eigen::MatrixXd mpsi_t_;  // ndof x 5, mass diagonal times psi^T
  Eigen::LDLT<Eigen::Matrix<double, 5, 5>> gram_;
};

/// Weak-form BGK relaxation M^v (m[g] - g), where m[g] is the nodal
/// Maxwellian sharing g's density, bulk velocity and temperature. The caller
/// applies the collision rate and any frame scaling.
Eigen::VectorXd bgk_relaxation(const VelocityBasis& basis,
                               const Eigen::VectorXd& g);

}  // namespace kinetic
