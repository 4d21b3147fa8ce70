#pragma once

#include <Eigen/Dense>
#include <functional>

#include "kinetic/mesh.hpp"

namespace kinetic {

/// Discontinuous modal basis on a uniform mesh: on every element the
/// functions phi_i(x) = sqrt((2i+1)/h) P_i(xi), i = 0..order, which are
/// orthonormal in the element L2 inner product. The mesh is uniform, so the
/// reference basis is element-independent.
class DGSpace {
 public:
  DGSpace(const Mesh1D& mesh, int order);

  const Mesh1D& mesh() const { return mesh_; }
  int order() const { return order_; }
  int modes() const { return order_ + 1; }

  /// phi_i at reference point xi.
  void basis(double xi, Eigen::VectorXd& values) const;
  /// d phi_i / dx at reference point xi.
  void basis_derivative(double xi, Eigen::VectorXd& derivatives) const;
  /// phi_i(-1) and phi_i(+1).
  const Eigen::VectorXd& trace_left() const { return trace_left_; }
  const Eigen::VectorXd& trace_right() const { return trace_right_; }

  /// Value of a modal coefficient vector at reference point xi.
  double value(const Eigen::VectorXd& modal, double xi) const;

  /// L2 projection of f (given in physical coordinates) onto element e,
  /// using a Gauss-Legendre rule with quad_points points.
  Eigen::VectorXd project(const std::function<double(double)>& f, int e,
                          int quad_points) const;

 private:
  Mesh1D mesh_;
  int order_;
  Eigen::VectorXd trace_left_;
  Eigen::VectorXd trace_right_;
};

/// P_0..P_n and their derivatives at x by the three-term recurrence.
void legendre_all(int n, double x, Eigen::VectorXd& values,
                  Eigen::VectorXd& derivatives);

}  // namespace kinetic
