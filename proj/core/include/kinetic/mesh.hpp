#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace kinetic {

/// Boundary treatment at a domain end.
enum class BCKind { periodic, inflow, outflow, specular, diffuse };

/// Data for one domain end. The state fields feed inflow boundaries (a full
/// Maxwellian rho, V, T) and diffuse walls (wall temperature T and tangential
/// wall velocity V; the emitted density follows from flux balance).
struct BoundaryCondition {
  BCKind kind = BCKind::periodic;
  double rho = 1.0;
  Eigen::Vector3d V = Eigen::Vector3d::Zero();
  double T = 0.5;
};

/// Uniform one-dimensional mesh on [x_min, x_max].
class Mesh1D {
 public:
  Mesh1D(double x_min, double x_max, int elements)
      : x_min_(x_min), x_max_(x_max), elements_(elements) {
    if (!(x_max > x_min))
      throw std::invalid_argument("Mesh1D: x_max must exceed x_min");
    if (elements < 1)
      throw std::invalid_argument("Mesh1D: need at least one element");
    h_ = (x_max - x_min) / elements;
  }

  int elements() const { return elements_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double h() const { return h_; }

  double left(int e) const { return x_min_ + e * h_; }
  double right(int e) const { return x_min_ + (e + 1) * h_; }
  double center(int e) const { return x_min_ + (e + 0.5) * h_; }
  /// Physical coordinate of reference point xi in [-1, 1] of element e.
  double to_physical(int e, double xi) const {
    return center(e) + 0.5 * h_ * xi;
  }

 private:
  double x_min_;
  double x_max_;
  int elements_;
  double h_;
};

}  // namespace kinetic
