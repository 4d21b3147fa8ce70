#pragma once

#include <Eigen/Dense>

#include "kinetic/quadrature.hpp"

namespace kinetic {

/// Macroscopic fields of a distribution: density, bulk velocity, total
/// energy density, pressure tensor, scalar pressure p = tr(P)/3, heat-flux
/// vector q = 1/2 * integral |v|^2 v f dv, and temperature T = p/rho.
struct MacroscopicState {
  double rho = 0.0;
  Eigen::Vector3d V = Eigen::Vector3d::Zero();
  double E = 0.0;
  Eigen::Matrix3d P = Eigen::Matrix3d::Zero();
  double p = 0.0;
  Eigen::Vector3d q = Eigen::Vector3d::Zero();
  double T = 0.0;
};

/// Maxwellian-weighted nodal spectral basis in velocity space.
///
/// Trial functions are exp(-|v|^2) times the tensor-product Lagrange
/// cardinal polynomials of the (N+1)-point Gauss-Hermite grid; test
/// functions are the cardinal polynomials themselves. A coefficient vector
/// stores nodal values of the polynomial factor g, so f = exp(-|v|^2) g.
/// Collocation at the quadrature nodes makes the mass and flux matrices
/// diagonal: M_mm = w3_m and (F_d)_mm = v_{m,d} * w3_m.
class VelocityBasis {
 public:
  /// Basis of polynomial degree `order` per direction (order >= 0).
  explicit VelocityBasis(int order);

  int order() const { return order_; }
  int n1d() const { return order_ + 1; }
  int size() const { return ndof_; }

  const Quad1D& rule1d() const { return rule1d_; }
  const Quad3D& rule3d() const { return rule3d_; }

  /// Lexicographic node index, ip = (i*(N+1) + j)*(N+1) + k.
  int index(int i, int j, int k) const { return rule3d_.index(i, j, k); }
  Eigen::Vector3d node(int ip) const {
    const auto& x = rule3d_.nodes[ip];
    return {x[0], x[1], x[2]};
  }

  /// Diagonal of the velocity mass matrix (tensor quadrature weights).
  const Eigen::VectorXd& mass_diagonal() const { return w3_; }
  /// Diagonal of the velocity flux matrix in direction d: v_{m,d} * w3_m.
  Eigen::VectorXd flux_diagonal(int d) const;
  /// Component d of all nodes as a vector.
  const Eigen::VectorXd& node_component(int d) const { return vcomp_[d]; }
  /// |v_m|^2 for all nodes.
  const Eigen::VectorXd& node_norm2() const { return vnorm2_; }

  /// 1D cardinal values l_j(x), j = 0..N (barycentric form).
  void cardinal_1d(double x, double* out) const;
  /// 1D cardinal derivative matrix D_ij = l_j'(x_i).
  const Eigen::MatrixXd& diff_1d() const { return diff1d_; }

  /// All 3D cardinal polynomials L_m(v).
  Eigen::VectorXd cardinal(const Eigen::Vector3d& v) const;
  /// Polynomial factor g(v) of the expansion (barycentric, exact at nodes).
  double evaluate_poly(const Eigen::VectorXd& coeffs,
                       const Eigen::Vector3d& v) const;
  /// Full distribution value f(v) = exp(-|v|^2) g(v).
  double evaluate(const Eigen::VectorXd& coeffs,
                  const Eigen::Vector3d& v) const;

  /// out_m += coeff * sum_i D(i, i_d(m)) y(m with i_d replaced by i):
  /// the transpose action of the direction-d nodal differentiation matrix.
  /// Used for integrals of the form sum_m y_m dL_m/dv_d.
  void add_diff_transpose(int d, const Eigen::VectorXd& y, double coeff,
                          Eigen::VectorXd& out) const;

  /// Macroscopic moments of the represented distribution, by the basis'
  /// own quadrature (exact for the polynomial factor up to the rule's
  /// degree). Throws std::domain_error on a degenerate state (rho <= 0).
  MacroscopicState moments(const Eigen::VectorXd& coeffs) const;

  /// Nodal interpolation of the Maxwellian with moments (rho, V, T):
  /// coeffs_m = rho/(2 pi T)^{3/2} exp(-|v_m - V|^2/(2T) + |v_m|^2).
  /// Requires rho > 0 and T > 0.
  Eigen::VectorXd project_maxwellian(double rho, const Eigen::Vector3d& V,
                                     double T) const;

 private:
  int order_;
  int ndof_;
  Quad1D rule1d_;
  Quad3D rule3d_;
  Eigen::VectorXd w3_;
  Eigen::VectorXd vcomp_[3];
  Eigen::VectorXd vnorm2_;
  Eigen::VectorXd bary_;  // normalized barycentric weights
  Eigen::MatrixXd diff1d_;
};

}  // namespace kinetic
