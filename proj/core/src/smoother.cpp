#include "kinetic/smoother.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace kinetic {

CGSpace::CGSpace(const Mesh1D& mesh, int order, bool periodic)
    : mesh_(mesh), order_(order), periodic_(periodic) {
  if (order < 1)
    throw std::invalid_argument("CGSpace: order must be >= 1");
  dofs_ = periodic ? mesh.elements() * order
                   : mesh.elements() * order + 1;
  const Quad1D gll = gauss_lobatto_rule(order + 1);
  nodes_ = Eigen::Map<const Eigen::VectorXd>(gll.nodes.data(), order + 1);
  bary_.resize(order + 1);
  for (int j = 0; j <= order; ++j) {
    double w = 1.0;
    for (int i = 0; i <= order; ++i)
      if (i != j) w *= nodes_[j] - nodes_[i];
    bary_[j] = 1.0 / w;
  }
}

void CGSpace::shape(double xi, Eigen::VectorXd& values) const {
  const int n = order_ + 1;
  values.resize(n);
  for (int i = 0; i < n; ++i)
    if (xi == nodes_[i]) {
      values.setZero();
      values[i] = 1.0;
      return;
    }
  double denom = 0.0;
  for (int j = 0; j < n; ++j) {
    values[j] = bary_[j] / (xi - nodes_[j]);
    denom += values[j];
  }
  values /= denom;
}

void CGSpace::shape_derivative(double xi, Eigen::VectorXd& derivatives) const {
  const int n = order_ + 1;
  derivatives.resize(n);
  for (int i = 0; i < n; ++i)
    if (xi == nodes_[i]) {
      // Row i of the nodal differentiation matrix.
      double diag = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        derivatives[j] = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
        diag -= derivatives[j];
      }
      derivatives[i] = diag;
      return;
    }
  // l_j = n_j / d with n_j = bary_j/(xi - xi_j) and d their sum.
  double d = 0.0, dprime = 0.0;
  Eigen::VectorXd nj(n), njp(n);
  for (int j = 0; j < n; ++j) {
    const double inv = 1.0 / (xi - nodes_[j]);
    nj[j] = bary_[j] * inv;
    njp[j] = -bary_[j] * inv * inv;
    d += nj[j];
    dprime += njp[j];
  }
  for (int j = 0; j < n; ++j)
    derivatives[j] = (njp[j] * d - nj[j] * dprime) / (d * d);
}

double CGSpace::value(const Eigen::VectorXd& u, int element, double xi) const {
  Eigen::VectorXd shp;
  shape(xi, shp);
  double acc = 0.0;
  for (int l = 0; l <= order_; ++l)
    acc += u[global_index(element, l)] * shp[l];
  return acc;
}

double CGSpace::derivative_x(const Eigen::VectorXd& u, int element,
                             double xi) const {
  Eigen::VectorXd der;
  shape_derivative(xi, der);
  double acc = 0.0;
  for (int l = 0; l <= order_; ++l)
    acc += u[global_index(element, l)] * der[l];
  return acc * 2.0 / mesh_.h();
}

Smoother::Smoother(const Mesh1D& mesh, int order, double c_smooth,
                   bool periodic)
    : space_(mesh, order, periodic),
      lambda_(c_smooth * mesh.h() * mesh.h() / (order * order)),
      rhs_rule_(gauss_legendre_rule(order + 2)) {
  if (c_smooth < 0.0)
    throw std::invalid_argument("Smoother: c_smooth must be >= 0");

  const int nloc = space_.nodes_per_element();
  rhs_shapes_.resize(nloc, rhs_rule_.size());
  Eigen::VectorXd shp;
  for (int q = 0; q < rhs_rule_.size(); ++q) {
    space_.shape(rhs_rule_.nodes[q], shp);
    rhs_shapes_.col(q) = shp;
  }

  // Local mass and stiffness on the reference element, exact by a
  // Gauss-Legendre rule of degree 2*order+1.
  const Quad1D rule = gauss_legendre_rule(order + 1);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nloc, nloc);
  Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(nloc, nloc);
  Eigen::VectorXd der;
  for (int q = 0; q < rule.size(); ++q) {
    space_.shape(rule.nodes[q], shp);
    space_.shape_derivative(rule.nodes[q], der);
    mass += rule.weights[q] * shp * shp.transpose();
    stiff += rule.weights[q] * der * der.transpose();
  }
  const double h = mesh.h();
  const Eigen::MatrixXd local =
      0.5 * h * mass + lambda_ * (2.0 / h) * stiff;

  std::vector<Eigen::Triplet<double>> triplets;
  for (int e = 0; e < mesh.elements(); ++e)
    for (int a = 0; a < nloc; ++a)
      for (int b = 0; b < nloc; ++b)
        triplets.emplace_back(space_.global_index(e, a),
                              space_.global_index(e, b), local(a, b));
  system_.resize(space_.dofs(), space_.dofs());
  system_.setFromTriplets(triplets.begin(), triplets.end());
  solver_.compute(system_);
}

void Smoother::set_constraints(EndConstraint left, EndConstraint right) {
  if (space_.periodic() && (left.fixed || right.fixed))
    throw std::invalid_argument(
        "Smoother: cannot pin end values of a periodic space");
  if ((left.fixed && penalty_[0] > 0.0) || (right.fixed && penalty_[1] > 0.0))
    throw std::invalid_argument(
        "Smoother: an end cannot be both pinned and penalized");
  const bool pattern_changed =
      left.fixed != left_.fixed || right.fixed != right_.fixed;
  left_ = left;
  right_ = right;
  if (pattern_changed) rebuild();
}

void Smoother::set_penalties(double left_weight, double right_weight) {
  if (left_weight < 0.0 || right_weight < 0.0)
    throw std::invalid_argument("Smoother: penalty weights must be >= 0");
  if (space_.periodic() && (left_weight > 0.0 || right_weight > 0.0))
    throw std::invalid_argument(
        "Smoother: cannot penalize end values of a periodic space");
  if ((left_weight > 0.0 && left_.fixed) || (right_weight > 0.0 && right_.fixed))
    throw std::invalid_argument(
        "Smoother: an end cannot be both pinned and penalized");
  if (left_weight == penalty_[0] && right_weight == penalty_[1]) return;
  penalty_[0] = left_weight;
  penalty_[1] = right_weight;
  rebuild();
}

void Smoother::rebuild() {
  const int dof[2] = {0, space_.dofs() - 1};
  const bool pinned[2] = {left_.fixed, right_.fixed};
  Eigen::SparseMatrix<double> mod = system_;
  for (int k = 0; k < 2; ++k)
    if (penalty_[k] != 0.0) mod.coeffRef(dof[k], dof[k]) += penalty_[k];
  // Save the original columns for the rhs adjustment, then eliminate
  // symmetrically.
  for (int k = 0; k < 2; ++k)
    if (pinned[k]) fixed_columns_[k] = Eigen::VectorXd(mod.col(dof[k]));
  for (int outer = 0; outer < mod.outerSize(); ++outer)
    for (Eigen::SparseMatrix<double>::InnerIterator it(mod, outer); it; ++it) {
      const bool row_pinned = (pinned[0] && it.row() == dof[0]) ||
                              (pinned[1] && it.row() == dof[1]);
      const bool col_pinned = (pinned[0] && it.col() == dof[0]) ||
                              (pinned[1] && it.col() == dof[1]);
      if (row_pinned || col_pinned)
        it.valueRef() = (it.row() == it.col()) ? 1.0 : 0.0;
    }
  mod.prune(0.0);
  solver_.compute(mod);
}

Eigen::VectorXd Smoother::smooth(const Eigen::MatrixXd& raw) const {
  const Mesh1D& mesh = space_.mesh();
  if (raw.rows() != mesh.elements() || raw.cols() != rhs_rule_.size())
    throw std::invalid_argument(
        "Smoother::smooth: raw must be elements x rhs_rule().size()");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space_.dofs());
  for (int e = 0; e < mesh.elements(); ++e)
    for (int q = 0; q < rhs_rule_.size(); ++q) {
      const double w = 0.5 * mesh.h() * rhs_rule_.weights[q] * raw(e, q);
      for (int l = 0; l < space_.nodes_per_element(); ++l)
        b[space_.global_index(e, l)] += w * rhs_shapes_(l, q);
    }

  const int dof[2] = {0, space_.dofs() - 1};
  const EndConstraint* cons[2] = {&left_, &right_};
  for (int k = 0; k < 2; ++k)
    if (cons[k]->fixed) b -= fixed_columns_[k] * cons[k]->value;
  for (int k = 0; k < 2; ++k)
    if (cons[k]->fixed) b[dof[k]] = cons[k]->value;
  return solver_.solve(b);
}

}  // namespace kinetic
