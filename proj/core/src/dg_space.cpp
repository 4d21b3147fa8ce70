#include "kinetic/dg_space.hpp"

#include <cmath>
#include <stdexcept>

#include "kinetic/quadrature.hpp"

namespace kinetic {

void legendre_all(int n, double x, Eigen::VectorXd& values,
                  Eigen::VectorXd& derivatives) {
  values.resize(n + 1);
  derivatives.resize(n + 1);
  values[0] = 1.0;
  derivatives[0] = 0.0;
  if (n == 0) return;
  values[1] = x;
  derivatives[1] = 1.0;
  for (int k = 1; k < n; ++k) {
    values[k + 1] = ((2.0 * k + 1.0) * x * values[k] - k * values[k - 1]) /
                    (k + 1.0);
    derivatives[k + 1] = derivatives[k - 1] + (2.0 * k + 1.0) * values[k];
  }
}

DGSpace::DGSpace(const Mesh1D& mesh, int order) : mesh_(mesh), order_(order) {
  if (order < 0)
    throw std::invalid_argument("DGSpace: order must be >= 0");
  trace_left_.resize(modes());
  trace_right_.resize(modes());
  basis(-1.0, trace_left_);
  basis(1.0, trace_right_);
}

void DGSpace::basis(double xi, Eigen::VectorXd& values) const {
  Eigen::VectorXd p, dp;
  legendre_all(order_, xi, p, dp);
  values.resize(modes());
  for (int i = 0; i <= order_; ++i)
    values[i] = std::sqrt((2.0 * i + 1.0) / mesh_.h()) * p[i];
}

void DGSpace::basis_derivative(double xi, Eigen::VectorXd& derivatives) const {
  Eigen::VectorXd p, dp;
  legendre_all(order_, xi, p, dp);
  derivatives.resize(modes());
  const double chain = 2.0 / mesh_.h();
  for (int i = 0; i <= order_; ++i)
    derivatives[i] = std::sqrt((2.0 * i + 1.0) / mesh_.h()) * dp[i] * chain;
}

double DGSpace::value(const Eigen::VectorXd& modal, double xi) const {
  Eigen::VectorXd phi;
  basis(xi, phi);
  return modal.dot(phi);
}

Eigen::VectorXd DGSpace::project(const std::function<double(double)>& f,
                                 int e, int quad_points) const {
  const Quad1D rule = gauss_legendre_rule(quad_points);
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(modes());
  Eigen::VectorXd phi;
  for (int q = 0; q < rule.size(); ++q) {
    basis(rule.nodes[q], phi);
    coeffs += 0.5 * mesh_.h() * rule.weights[q] *
              f(mesh_.to_physical(e, rule.nodes[q])) * phi;
  }
  return coeffs;  // mass matrix is the identity
}

}  // namespace kinetic
