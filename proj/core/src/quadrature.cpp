#include "kinetic/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace kinetic {

namespace {

// Nodes and weights for a weight function with recurrence coefficients
// alpha_k (diagonal), sqrt(beta_k) (off-diagonal) and zeroth moment mu0:
// eigenvalues of the Jacobi matrix are the nodes, mu0 times the squared
// first components of the normalized eigenvectors are the weights.
Quad1D golub_welsch(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta,
                    double mu0) {
  const int n = static_cast<int>(alpha.size());
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jacobi(i, i) = alpha[i];
    if (i + 1 < n) {
      const double b = std::sqrt(beta[i + 1]);
      jacobi(i, i + 1) = b;
      jacobi(i + 1, i) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  Quad1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()[i];
    const double q0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * q0 * q0;
  }
  return rule;
}

// Orthonormal Hermite polynomials for the weight exp(-x^2):
// h_{-1} = 0, h_0 = pi^{-1/4}, sqrt((k+1)/2) h_{k+1} = x h_k - sqrt(k/2) h_{k-1}.
// Returns h_0..h_n at x.
void orthonormal_hermite(int n, double x, std::vector<double>& h) {
  h.resize(n + 1);
  h[0] = std::pow(M_PI, -0.25);
  if (n == 0) return;
  h[1] = std::sqrt(2.0) * x * h[0];
  for (int k = 1; k < n; ++k)
    h[k + 1] =
        (x * h[k] - std::sqrt(0.5 * k) * h[k - 1]) / std::sqrt(0.5 * (k + 1));
}

// Newton-polish the eigensolver nodes to full precision and recompute the
// weights through the Christoffel function 1/sum_k h_k(x)^2; the raw
// eigenproblem results are accurate only to ~1e-14 relative, which the
// highest-degree moments of large rules amplify past 1e-12.
void polish_hermite(Quad1D& rule) {
  const int n = rule.size();
  std::vector<double> h;
  for (int i = 0; i < n; ++i) {
    double x = rule.nodes[i];
    for (int it = 0; it < 3; ++it) {
      orthonormal_hermite(n, x, h);
      const double deriv = std::sqrt(2.0 * n) * h[n - 1];
      if (deriv == 0.0) break;
      x -= h[n] / deriv;
    }
    rule.nodes[i] = x;
    orthonormal_hermite(n - 1, x, h);
    double christoffel = 0.0;
    for (int k = 0; k < n; ++k) christoffel += h[k] * h[k];
    rule.weights[i] = 1.0 / christoffel;
  }
}

// Enforce exact symmetry of a rule whose weight function is even: pair the
// sorted nodes about 0 and average. Keeps downstream odd-moment sums and
// mirror-image lookups exact in floating point.
void symmetrize(Quad1D& rule) {
  const int n = rule.size();
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
}

}  // namespace

Quad1D gauss_hermite_rule(int n_points) {
  if (n_points < 1)
    throw std::invalid_argument("gauss_hermite_rule: n_points must be >= 1");

  static std::map<int, Quad1D> cache;
  static std::mutex cache_mutex;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n_points);
  if (it != cache.end()) return it->second;

  // Physicists' Hermite recurrence: alpha_k = 0, beta_k = k/2,
  // mu0 = integral of exp(-x^2) = sqrt(pi).
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n_points);
  Eigen::VectorXd beta(n_points);
  beta[0] = 0.0;
  for (int k = 1; k < n_points; ++k) beta[k] = 0.5 * k;
  Quad1D rule = golub_welsch(alpha, beta, std::sqrt(M_PI));
  polish_hermite(rule);
  symmetrize(rule);
  return cache.emplace(n_points, std::move(rule)).first->second;
}

Quad1D gauss_legendre_rule(int n_points) {
  if (n_points < 1)
    throw std::invalid_argument("gauss_legendre_rule: n_points must be >= 1");

  static std::map<int, Quad1D> cache;
  static std::mutex cache_mutex;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n_points);
  if (it != cache.end()) return it->second;

  // Legendre recurrence on [-1, 1]: alpha_k = 0, beta_k = k^2/(4k^2 - 1),
  // mu0 = 2.
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n_points);
  Eigen::VectorXd beta(n_points);
  beta[0] = 0.0;
  for (int k = 1; k < n_points; ++k)
    beta[k] = static_cast<double>(k) * k / (4.0 * k * k - 1.0);
  Quad1D rule = golub_welsch(alpha, beta, 2.0);
  symmetrize(rule);
  return cache.emplace(n_points, std::move(rule)).first->second;
}

Quad1D gauss_lobatto_rule(int n_points) {
  if (n_points < 2)
    throw std::invalid_argument("gauss_lobatto_rule: n_points must be >= 2");

  static std::map<int, Quad1D> cache;
  static std::mutex cache_mutex;
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache.find(n_points);
  if (it != cache.end()) return it->second;

  const int m = n_points - 1;  // Legendre degree
  // Legendre value and first derivative by recurrence.
  const auto legendre = [m](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < m; ++k) {
      const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
      p0 = p1;
      p1 = p2;
    }
    const double dp = (std::abs(x) == 1.0)
                          ? std::pow(x, m + 1) * 0.5 * m * (m + 1.0)
                          : m * (x * p1 - p0) / (x * x - 1.0);
    return std::pair<double, double>{p1, dp};
  };

  Quad1D rule;
  rule.nodes.resize(n_points);
  rule.weights.resize(n_points);
  rule.nodes[0] = -1.0;
  rule.nodes[m] = 1.0;
  // Interior nodes are the roots of P_m'; Newton from Chebyshev-like guesses
  // using P''_m from the Legendre differential equation.
  for (int k = 1; k < m; ++k) {
    double x = -std::cos(M_PI * k / m);
    for (int iter = 0; iter < 50; ++iter) {
      const auto [p, dp] = legendre(x);
      const double d2p = (2.0 * x * dp - m * (m + 1.0) * p) / (1.0 - x * x);
      const double step = dp / d2p;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    rule.nodes[k] = x;
  }
  for (int i = 0; i <= m; ++i) {
    const double p = legendre(rule.nodes[i]).first;
    rule.weights[i] = 2.0 / (m * (m + 1.0) * p * p);
  }
  symmetrize(rule);
  return cache.emplace(n_points, std::move(rule)).first->second;
}

Quad3D tensor_rule_3d(const Quad1D& rule) {
  const int n = rule.size();
  Quad3D t;
  t.n1d = n;
  t.nodes.resize(static_cast<std::size_t>(n) * n * n);
  t.weights.resize(t.nodes.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const int ip = t.index(i, j, k);
        t.nodes[ip] = {rule.nodes[i], rule.nodes[j], rule.nodes[k]};
        t.weights[ip] = rule.weights[i] * rule.weights[j] * rule.weights[k];
      }
  return t;
}

}  // namespace kinetic
