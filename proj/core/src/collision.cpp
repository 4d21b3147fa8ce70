#include "kinetic/collision.hpp"

#include <cmath>
#include <stdexcept>

namespace kinetic {

namespace {

constexpr int kMaxPoints1D = 64;

/// out[(k1*n + k2)*n + k3] += coeff * l1[k1] l2[k2] l3[k3].
inline void add_outer3(const double* l1, const double* l2, const double* l3,
                       int n, double coeff, double* out) {
  for (int k1 = 0; k1 < n; ++k1) {
    const double c1 = coeff * l1[k1];
    double* o1 = out + k1 * n * n;
    for (int k2 = 0; k2 < n; ++k2) {
      const double c12 = c1 * l2[k2];
      double* o2 = o1 + k2 * n;
      for (int k3 = 0; k3 < n; ++k3) o2[k3] += c12 * l3[k3];
    }
  }
}

}  // namespace

SphereRule sphere_quadrature(int degree) {
  if (degree < 0)
    throw std::invalid_argument("sphere_quadrature: degree must be >= 0");
  const int n_theta = (degree + 2) / 2;  // ceil((degree + 1)/2)
  const int n_phi = 2 * n_theta;
  const Quad1D polar = gauss_legendre_rule(n_theta);

  SphereRule rule;
  rule.nodes.reserve(n_theta * n_phi);
  rule.weights.reserve(n_theta * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double mu = polar.nodes[i];
    const double sin_theta = std::sqrt(1.0 - mu * mu);
    const double w = polar.weights[i] * (2.0 * M_PI / n_phi);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * M_PI * (j + 0.5) / n_phi;
      rule.nodes.emplace_back(sin_theta * std::cos(phi),
                              sin_theta * std::sin(phi), mu);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> scattered_pair(
    const Eigen::Vector3d& v, const Eigen::Vector3d& w,
    const Eigen::Vector3d& sigma) {
  const Eigen::Vector3d center = 0.5 * (v + w);
  const Eigen::Vector3d half = 0.5 * (v - w).norm() * sigma;
  return {center + half, center - half};
}

BoltzmannOperator::BoltzmannOperator(const VelocityBasis& basis,
                                     CollisionOptions opts)
    : basis_(&basis), opts_(std::move(opts)) {
  const int n = basis.n1d();
  if (n > kMaxPoints1D)
    throw std::invalid_argument("BoltzmannOperator: order too large");
  nq_ = opts_.quad_points_1d > 0 ? opts_.quad_points_1d : 2 * n;
  if (nq_ < n)
    throw std::invalid_argument(
        "BoltzmannOperator: quad_points_1d must be at least order + 1");
  if (opts_.beta < 0.0 || opts_.beta > 1.0)
    throw std::invalid_argument("BoltzmannOperator: beta must lie in [0, 1]");
  const int sphere_degree = opts_.sphere_degree > 0
                                ? opts_.sphere_degree
                                : std::max(6, 3 * basis.order());
  sphere_ = sphere_quadrature(sphere_degree);
  for (double w : sphere_.weights) sphere_total_ += w;
  gh_ = gauss_hermite_rule(nq_);

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  pair_x_.resize(nq_ * nq_);
  flip_.resize(nq_ * nq_);
  for (int i = 0; i < nq_; ++i)
    for (int j = 0; j < nq_; ++j) {
      pair_x_[i * nq_ + j] = (gh_.nodes[i] + gh_.nodes[j]) * inv_sqrt2;
      // The nodes are exactly symmetric, so (x_i - x_j)/sqrt(2) is the pair
      // point of the mirrored second index.
      flip_[i * nq_ + j] = i * nq_ + (nq_ - 1 - j);
    }
  card_.resize(n, nq_ * nq_);
  for (int p = 0; p < nq_ * nq_; ++p)
    basis.cardinal_1d(pair_x_[p], card_.col(p).data());
}

std::size_t BoltzmannOperator::matrix_bytes() const {
  const std::size_t cols = static_cast<std::size_t>(nq_) * nq_ * nq_ * nq_ *
                           nq_ * nq_;
  return sizeof(double) * static_cast<std::size_t>(basis_->size()) * cols;
}

void BoltzmannOperator::accumulate_bracket(const Eigen::Vector3d& vbar,
                                           const Eigen::Vector3d& vhat,
                                           int p1, int p2, int p3,
                                           double coeff, double* out) const {
  const double r = vhat.norm();
  double c = coeff;
  if (opts_.beta != 0.0) c *= std::pow(2.0 * r, opts_.beta);  // |v-w| = 2r
  const Eigen::Vector3d axis = vhat / r;
  const int n = basis_->n1d();
  double l1[kMaxPoints1D], l2[kMaxPoints1D], l3[kMaxPoints1D];

  double b_total = 0.0;
  for (int s = 0; s < sphere_.size(); ++s) {
    double wb = sphere_.weights[s];
    if (opts_.angular) wb *= opts_.angular(sphere_.nodes[s].dot(axis));
    b_total += wb;
    const Eigen::Vector3d post = vbar + r * sphere_.nodes[s];
    basis_->cardinal_1d(post[0], l1);
    basis_->cardinal_1d(post[1], l2);
    basis_->cardinal_1d(post[2], l3);
    add_outer3(l1, l2, l3, n, c * wb, out);
  }
  // The loss point vbar + vhat sits on the per-direction pair grids, so its
  // cardinal values are columns of the precomputed table.
  add_outer3(card_.col(p1).data(), card_.col(p2).data(), card_.col(p3).data(),
             n, -c * b_total, out);
}

namespace {
struct PairLoop {
  int nq;
  const Quad1D* gh;

  template <class F>
  void run(F&& body) const {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const int M = nq * nq;
    for (int a1 = 0; a1 < nq; ++a1)
      for (int a2 = 0; a2 < nq; ++a2)
        for (int a3 = 0; a3 < nq; ++a3) {
          const Eigen::Vector3d vbar{gh->nodes[a1] * inv_sqrt2,
                                     gh->nodes[a2] * inv_sqrt2,
                                     gh->nodes[a3] * inv_sqrt2};
          const double wa =
              gh->weights[a1] * gh->weights[a2] * gh->weights[a3];
          for (int b1 = 0; b1 < nq; ++b1)
            for (int b2 = 0; b2 < nq; ++b2)
              for (int b3 = 0; b3 < nq; ++b3) {
                const Eigen::Vector3d vhat{gh->nodes[b1] * inv_sqrt2,
                                           gh->nodes[b2] * inv_sqrt2,
                                           gh->nodes[b3] * inv_sqrt2};
                if (vhat.squaredNorm() == 0.0) continue;  // empty bracket
                const double w =
                    wa * gh->weights[b1] * gh->weights[b2] * gh->weights[b3];
                const int p1 = a1 * nq + b1;
                const int p2 = a2 * nq + b2;
                const int p3 = a3 * nq + b3;
                const long col =
                    (static_cast<long>(p1) * M + p2) * M + p3;
                body(col, p1, p2, p3, vbar, vhat, w);
              }
        }
  }
};
}  // namespace

void BoltzmannOperator::build_matrix() {
  if (K_.size() > 0) return;
  if (matrix_bytes() > opts_.max_matrix_bytes)
    throw std::length_error(
        "BoltzmannOperator::build_matrix: matrix would exceed "
        "max_matrix_bytes; lower the order or quadrature count, raise the "
        "limit, or use apply_direct");
  const long M = static_cast<long>(nq_) * nq_;
  K_.setZero(basis_->size(), M * M * M);
  PairLoop{nq_, &gh_}.run([&](long col, int p1, int p2, int p3,
                              const Eigen::Vector3d& vbar,
                              const Eigen::Vector3d& vhat, double w) {
    accumulate_bracket(vbar, vhat, p1, p2, p3, w,
                       K_.data() + col * basis_->size());
  });
}

Eigen::VectorXd BoltzmannOperator::interpolate_pair_grid(
    const Eigen::VectorXd& g) const {
  using RowMat =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const int n = basis_->n1d();
  const int M = nq_ * nq_;
  // Contract one direction at a time against the cardinal table.
  Eigen::Map<const RowMat> g0(g.data(), n, n * n);
  const RowMat a1 = card_.transpose() * g0;  // [p1, k2*n + k3]
  RowMat a2(static_cast<long>(M) * M, n);    // [p1*M + p2, k3]
  for (int p1 = 0; p1 < M; ++p1) {
    Eigen::Map<const RowMat> slab(a1.row(p1).data(), n, n);
    a2.middleRows(static_cast<long>(p1) * M, M) = card_.transpose() * slab;
  }
  RowMat e = a2 * card_;  // [p1*M + p2, p3]
  return Eigen::Map<Eigen::VectorXd>(e.data(), static_cast<long>(M) * M * M);
}

Eigen::VectorXd BoltzmannOperator::pair_products(
    const Eigen::VectorXd& g) const {
  const Eigen::VectorXd e = interpolate_pair_grid(g);
  const long M = static_cast<long>(nq_) * nq_;
  Eigen::VectorXd products(e.size());
  for (long p1 = 0; p1 < M; ++p1) {
    const long f1 = flip_[p1];
    for (long p2 = 0; p2 < M; ++p2) {
      const long f2 = flip_[p2];
      const long base = (p1 * M + p2) * M;
      const long fbase = (f1 * M + f2) * M;
      for (long p3 = 0; p3 < M; ++p3)
        products[base + p3] = e[base + p3] * e[fbase + flip_[p3]];
    }
  }
  return products;
}

Eigen::VectorXd BoltzmannOperator::apply(const Eigen::VectorXd& g) const {
  if (K_.size() == 0)
    throw std::logic_error(
        "BoltzmannOperator::apply: build_matrix() has not been called");
  return K_ * pair_products(g);
}

Eigen::VectorXd BoltzmannOperator::apply_direct(
    const Eigen::VectorXd& g) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(basis_->size());
  PairLoop{nq_, &gh_}.run([&](long /*col*/, int p1, int p2, int p3,
                              const Eigen::Vector3d& vbar,
                              const Eigen::Vector3d& vhat, double w) {
    const double pair = basis_->evaluate_poly(g, vbar + vhat) *
                        basis_->evaluate_poly(g, vbar - vhat);
    if (pair != 0.0)
      accumulate_bracket(vbar, vhat, p1, p2, p3, w * pair, out.data());
  });
  return out;
}

ConservationFix::ConservationFix(const VelocityBasis& basis) {
  if (basis.order() < 2)
    throw std::invalid_argument(
        "ConservationFix: order must be at least 2 for the invariants to be "
        "independent on the node set");
  const int ndof = basis.size();
  psi_.resize(5, ndof);
  psi_.row(0).setOnes();
  for (int d = 0; d < 3; ++d)
    psi_.row(1 + d) = basis.node_component(d).transpose();
  psi_.row(4) = basis.node_norm2().transpose();
  mpsi_t_ = basis.mass_diagonal().asDiagonal() * psi_.transpose();
  gram_.compute(psi_ * mpsi_t_);
}

Eigen::Matrix<double, 5, 1> ConservationFix::invariants(
    const Eigen::VectorXd& Q) const {
  return psi_ * Q;
}

Eigen::VectorXd ConservationFix::apply(const Eigen::VectorXd& Q) const {
  return Q - mpsi_t_ * gram_.solve(psi_ * Q);
}

Eigen::VectorXd bgk_relaxation(const VelocityBasis& basis,
                               const Eigen::VectorXd& g) {
  const MacroscopicState m = basis.moments(g);
  const Eigen::VectorXd target = basis.project_maxwellian(m.rho, m.V, m.T);
  return basis.mass_diagonal().cwiseProduct(target - g);
}

}  // namespace kinetic
