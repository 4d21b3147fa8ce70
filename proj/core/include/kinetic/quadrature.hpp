#pragma once

#include <array>
#include <vector>

namespace kinetic {

/// One-dimensional Gauss-type rule: integral ~ sum_i weights[i] * f(nodes[i]).
struct Quad1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Tensor-product rule on R^3 built from a 1D rule with n points per
/// direction. Points are indexed lexicographically: ip = (i*n + j)*n + k,
/// where (i, j, k) are the 1D indices of the (x, y, z) components.
struct Quad3D {
  std::vector<std::array<double, 3>> nodes;
  std::vector<double> weights;
  int n1d = 0;

  int size() const { return static_cast<int>(nodes.size()); }
  int index(int i, int j, int k) const { return (i * n1d + j) * n1d + k; }
};

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
/// Nodes/weights from the symmetric tridiagonal Jacobi eigenproblem
/// (Golub-Welsch); the node set is symmetrized exactly about 0.
/// Exact for polynomials of degree <= 2*n_points - 1; sum of weights
/// is sqrt(pi). Throws std::invalid_argument for n_points < 1.
Quad1D gauss_hermite_rule(int n_points);

/// Gauss-Legendre rule for the weight 1 on [-1, 1], by the same
/// Golub-Welsch construction. Sum of weights is 2.
Quad1D gauss_legendre_rule(int n_points);

/// Gauss-Lobatto-Legendre rule on [-1, 1]: n_points >= 2 nodes including
/// both endpoints, exact for polynomials of degree <= 2*n_points - 3.
Quad1D gauss_lobatto_rule(int n_points);

/// Tensor-product rule on R^3 from a 1D rule (see Quad3D for indexing).
Quad3D tensor_rule_3d(const Quad1D& rule);

}  // namespace kinetic
