#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>

#include "kinetic/mesh.hpp"
#include "kinetic/quadrature.hpp"

namespace kinetic {

/// Continuous nodal finite-element space on the mesh: Lagrange functions on
/// the per-element Gauss-Lobatto nodes of the given order, glued at element
/// interfaces (wrapping around for a periodic topology).
class CGSpace {
 public:
  CGSpace(const Mesh1D& mesh, int order, bool periodic);

  const Mesh1D& mesh() const { return mesh_; }
  int order() const { return order_; }
  bool periodic() const { return periodic_; }
  int dofs() const { return dofs_; }
  int nodes_per_element() const { return order_ + 1; }

  /// Reference Gauss-Lobatto nodes of the element.
  const Eigen::VectorXd& ref_nodes() const { return nodes_; }
  int global_index(int element, int local) const {
    return (element * order_ + local) % dofs_;
  }

  /// Shape function values / reference derivatives at xi in [-1, 1].
  void shape(double xi, Eigen::VectorXd& values) const;
  void shape_derivative(double xi, Eigen::VectorXd& derivatives) const;

  double value(const Eigen::VectorXd& u, int element, double xi) const;
  /// d/dx of the interpolant (includes the 2/h reference chain factor).
  double derivative_x(const Eigen::VectorXd& u, int element, double xi) const;

 private:
  Mesh1D mesh_;
  int order_;
  bool periodic_;
  int dofs_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd bary_;
};

/// Optional value constraint at a domain end.
struct EndConstraint {
  bool fixed = false;
  double value = 0.0;
};

/// Gradient-penalized projection onto the continuous space: solves
/// (M + lambda K) u = b with M the mass matrix, K the stiffness matrix,
/// lambda = c h^2 / order^2, and b_i the integrals of a raw field against
/// the shape functions. End values can be pinned (eliminated symmetrically
/// before factorization) or penalized toward zero by a point weight added
/// to the end diagonal.
class Smoother {
 public:
  Smoother(const Mesh1D& mesh, int order, double c_smooth, bool periodic);

  const CGSpace& space() const { return space_; }
  double lambda() const { return lambda_; }

  /// Quadrature rule at which smooth() expects the raw-field samples.
  const Quad1D& rhs_rule() const { return rhs_rule_; }

  /// Re-factors only when the constraint pattern changes; constraining a
  /// periodic space throws.
  void set_constraints(EndConstraint left, EndConstraint right);

  /// Adds weight * u(end) * v(end) to the bilinear form (weight = 1/eps),
  /// driving the end value toward zero as the weight grows. An end cannot
  /// be both pinned and penalized.
  void set_penalties(double left_weight, double right_weight);

  /// raw(e, q) are samples of the field at rhs_rule() node q of element e.
  Eigen::VectorXd smooth(const Eigen::MatrixXd& raw) const;

 private:
  void rebuild();

  CGSpace space_;
  double lambda_;
  Quad1D rhs_rule_;
  Eigen::MatrixXd rhs_shapes_;  // shape values at rhs_rule_ nodes
  Eigen::SparseMatrix<double> system_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
  EndConstraint left_;
  EndConstraint right_;
  double penalty_[2] = {0.0, 0.0};
  Eigen::VectorXd fixed_columns_[2];  // original columns of pinned dofs
};

}  // namespace kinetic
