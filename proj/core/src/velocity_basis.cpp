#include "kinetic/velocity_basis.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kinetic {

VelocityBasis::VelocityBasis(int order) : order_(order) {
  if (order < 0)
    throw std::invalid_argument("VelocityBasis: order must be >= 0");
  const int n = order + 1;
  ndof_ = n * n * n;
  rule1d_ = gauss_hermite_rule(n);
  rule3d_ = tensor_rule_3d(rule1d_);

  w3_.resize(ndof_);
  vnorm2_.resize(ndof_);
  for (int d = 0; d < 3; ++d) vcomp_[d].resize(ndof_);
  for (int ip = 0; ip < ndof_; ++ip) {
    w3_[ip] = rule3d_.weights[ip];
    const auto& x = rule3d_.nodes[ip];
    vnorm2_[ip] = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    for (int d = 0; d < 3; ++d) vcomp_[d][ip] = x[d];
  }

  // Barycentric weights, normalized by their largest magnitude to keep the
  // products representable at high order.
  bary_.resize(n);
  for (int j = 0; j < n; ++j) {
    double w = 1.0;
    for (int i = 0; i < n; ++i)
      if (i != j) w /= (rule1d_.nodes[j] - rule1d_.nodes[i]);
    bary_[j] = w;
  }
  bary_ /= bary_.cwiseAbs().maxCoeff();

  // Nodal differentiation matrix from the barycentric weights.
  diff1d_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      diff1d_(i, j) =
          (bary_[j] / bary_[i]) / (rule1d_.nodes[i] - rule1d_.nodes[j]);
      diag -= diff1d_(i, j);
    }
    diff1d_(i, i) = diag;
  }
}

Eigen::VectorXd VelocityBasis::flux_diagonal(int d) const {
  return vcomp_[d].cwiseProduct(w3_);
}

void VelocityBasis::cardinal_1d(double x, double* out) const {
  const int n = n1d();
  // Exact node hit: cardinal vector is a Kronecker delta.
  for (int j = 0; j < n; ++j) {
    if (x == rule1d_.nodes[j]) {
      for (int i = 0; i < n; ++i) out[i] = 0.0;
      out[j] = 1.0;
      return;
    }
  }
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    out[j] = bary_[j] / (x - rule1d_.nodes[j]);
    sum += out[j];
  }
  const double inv = 1.0 / sum;
  for (int j = 0; j < n; ++j) out[j] *= inv;
}

Eigen::VectorXd VelocityBasis::cardinal(const Eigen::Vector3d& v) const {
  const int n = n1d();
  Eigen::VectorXd l0(n), l1(n), l2(n);
  cardinal_1d(v[0], l0.data());
  cardinal_1d(v[1], l1.data());
  cardinal_1d(v[2], l2.data());
  Eigen::VectorXd out(ndof_);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double lij = l0[i] * l1[j];
      const int base = (i * n + j) * n;
      for (int k = 0; k < n; ++k) out[base + k] = lij * l2[k];
    }
  return out;
}

double VelocityBasis::evaluate_poly(const Eigen::VectorXd& coeffs,
                                    const Eigen::Vector3d& v) const {
  const int n = n1d();
  Eigen::VectorXd l0(n), l1(n), l2(n);
  cardinal_1d(v[0], l0.data());
  cardinal_1d(v[1], l1.data());
  cardinal_1d(v[2], l2.data());
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double acc_i = 0.0;
    for (int j = 0; j < n; ++j) {
      const int base = (i * n + j) * n;
      double acc_j = 0.0;
      for (int k = 0; k < n; ++k) acc_j += l2[k] * coeffs[base + k];
      acc_i += l1[j] * acc_j;
    }
    acc += l0[i] * acc_i;
  }
  return acc;
}

double VelocityBasis::evaluate(const Eigen::VectorXd& coeffs,
                               const Eigen::Vector3d& v) const {
  return std::exp(-v.squaredNorm()) * evaluate_poly(coeffs, v);
}

void VelocityBasis::add_diff_transpose(int d, const Eigen::VectorXd& y,
                                       double coeff,
                                       Eigen::VectorXd& out) const {
  const int n = n1d();
  const int strides[3] = {n * n, n, 1};
  const int stride = strides[d];
  // Iterate over all fibers along direction d and apply D^T to each.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int base = 0;
      switch (d) {
        case 0: base = a * n + b; break;          // free: (j,k)
        case 1: base = a * n * n + b; break;      // free: (i,k)
        default: base = (a * n + b) * n; break;   // free: (i,j)
      }
      for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += diff1d_(j, i) * y[base + j * stride];
        out[base + i * stride] += coeff * acc;
      }
    }
}

MacroscopicState VelocityBasis::moments(const Eigen::VectorXd& coeffs) const {
  double m0 = 0.0;
  Eigen::Vector3d m1 = Eigen::Vector3d::Zero();
  Eigen::Matrix3d m2 = Eigen::Matrix3d::Zero();
  Eigen::Vector3d m3 = Eigen::Vector3d::Zero();
  for (int ip = 0; ip < ndof_; ++ip) {
    const double wc = w3_[ip] * coeffs[ip];
    const Eigen::Vector3d v = node(ip);
    m0 += wc;
    m1 += wc * v;
    m2 += wc * v * v.transpose();
    m3 += 0.5 * wc * vnorm2_[ip] * v;
  }
  if (!(m0 > 0.0)) {
    std::ostringstream msg;
    msg << "moments: degenerate state, rho = " << m0;
    throw std::domain_error(msg.str());
  }
  MacroscopicState s;
  s.rho = m0;
  s.V = m1 / m0;
  s.E = 0.5 * m2.trace();
  s.P = m2 - m0 * s.V * s.V.transpose();
  s.p = s.P.trace() / 3.0;
  s.q = m3;
  s.T = s.p / s.rho;
  return s;
}

Eigen::VectorXd VelocityBasis::project_maxwellian(double rho,
                                                  const Eigen::Vector3d& V,
                                                  double T) const {
  if (!(rho > 0.0) || !(T > 0.0))
    throw std::invalid_argument(
        "project_maxwellian: requires rho > 0 and T > 0");
  const double norm = rho / std::pow(2.0 * M_PI * T, 1.5);
  Eigen::VectorXd coeffs(ndof_);
  for (int ip = 0; ip < ndof_; ++ip) {
    const Eigen::Vector3d v = node(ip);
    coeffs[ip] =
        norm * std::exp(-(v - V).squaredNorm() / (2.0 * T) + vnorm2_[ip]);
  }
  return coeffs;
}

}  // namespace kinetic
