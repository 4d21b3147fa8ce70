#pragma once

#include <Eigen/Dense>
#include <vector>

#include "kinetic/dg_space.hpp"
#include "kinetic/frame.hpp"
#include "kinetic/mesh.hpp"
#include "kinetic/velocity_basis.hpp"

namespace kinetic {

/// Solution coefficients: one block per element with one row per spatial
/// mode and one column per velocity node.
using State = std::vector<Eigen::MatrixXd>;

State zero_state(const DGSpace& space, const VelocityBasis& basis);

/// The same physical distribution re-expressed in another frame, by nodal
/// reframing at the per-element Gauss collocation points.
State reframe_state(const DGSpace& space, const VelocityBasis& basis,
                    const State& c, const AnsatzFrame& from,
                    const AnsatzFrame& to);

/// Totals (mass, momentum, energy) of the represented distribution:
/// [integral rho, integral rho V (3 entries), integral E] over the domain.
Eigen::Matrix<double, 5, 1> conserved_totals(const DGSpace& space,
                                             const VelocityBasis& basis,
                                             const AnsatzFrame& frame,
                                             const State& c);

/// Moving-frame DG transport: the scale^{3/2}-weighted mass operator, the
/// facet-upwind flux with its frame-gradient volume coupling, and the
/// frame-time-derivative coupling. The frame enters through set_frame and
/// is cached at the per-element quadrature and facet points.
class TransportOperator {
 public:
  TransportOperator(const DGSpace* space, const VelocityBasis* basis,
                    BoundaryCondition left, BoundaryCondition right);

  const DGSpace& space() const { return *space_; }
  const VelocityBasis& basis() const { return *basis_; }
  bool periodic() const { return periodic_; }

  /// Caches frame values, assembles and factors the weighted mass blocks,
  /// and evaluates boundary exterior data. Must be called before the apply
  /// and solve members; the frame must outlive this operator's use of it.
  void set_frame(const AnsatzFrame* frame);

  /// Weighted mass application: block scale^{3/2} spatial mass times the
  /// diagonal velocity mass.
  State apply_mass(const State& c) const;
  /// Blockwise inverse: spatial solve per velocity column, then the
  /// diagonal velocity scaling.
  State solve_mass(const State& r) const;
  /// Spectral condition number of one element's spatial mass block.
  double mass_condition(int element) const;

  /// Facet upwind flux plus the volume transport terms (spatial derivative
  /// of the test function and the frame-gradient velocity coupling).
  State apply_flux(const State& c) const;

  /// Coupling of the frame's time rates into the velocity gradient of the
  /// test function.
  State apply_time_coupling(const State& c) const;

  /// Net outward mass flux through the two domain ends for the given state
  /// (zero for periodic topology).
  double boundary_mass_flux(const State& c) const;

  /// Largest |sqrt(scale) v_1 + shift_1| over cached frame points.
  double max_speed() const;

 private:
  struct VolumePoint {
    double jw = 0.0;      // h/2 * quadrature weight * scale^{3/2}
    double sqrt_s = 1.0;  // sqrt(scale)
    double shift1 = 0.0;
    Eigen::Vector3d avec = Eigen::Vector3d::Zero();  // shift_t / sqrt(scale)
    double ascl = 0.0;                               // scale_t / (2 scale)
    Eigen::Vector3d bvec = Eigen::Vector3d::Zero();  // shift_x / sqrt(scale)
    double bscl = 0.0;                               // scale_x / (2 scale)
  };
  struct FacetPoint {
    double jac = 0.0;  // scale^{3/2}
    double sqrt_s = 1.0;
    double shift1 = 0.0;
  };

  void check_ready(const State& c) const;
  Eigen::VectorXd exterior_trace(int side,
                                 const Eigen::VectorXd& interior) const;
  // z_m = (cvec + cscl v_m)_d-weighted gradient sums: accumulates
  // sum_d D_d^T [(cvec_d + cscl v_{m,d}) u_m] into out.
  void add_gradient_coupling(const Eigen::VectorXd& u,
                             const Eigen::Vector3d& cvec, double cscl,
                             Eigen::VectorXd& out) const;

  const DGSpace* space_;
  const VelocityBasis* basis_;
  BoundaryCondition bc_[2];
  bool periodic_ = false;
  const AnsatzFrame* frame_ = nullptr;

  Quad1D xrule_;
  Eigen::MatrixXd phi_;    // modes x quad points
  Eigen::MatrixXd dphi_;   // d/dx, modes x quad points
  std::vector<int> flip_;  // v1 sign-flip node permutation

  std::vector<std::vector<VolumePoint>> vol_;      // [element][quad point]
  std::vector<FacetPoint> facet_;                  // [element + 1]
  std::vector<Eigen::LLT<Eigen::MatrixXd>> llts_;  // spatial mass factors
  std::vector<Eigen::MatrixXd> mass_x_;
  Eigen::VectorXd exterior_maxwellian_[2];  // inflow/outflow nodal data
  Eigen::VectorXd wall_maxwellian_[2];      // unnormalized diffuse data
  double max_speed_ = 0.0;
};

}  // namespace kinetic
