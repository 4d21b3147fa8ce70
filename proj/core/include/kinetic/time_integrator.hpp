#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <memory>
#include <optional>

#include "kinetic/collision.hpp"
#include "kinetic/frame.hpp"
#include "kinetic/smoother.hpp"
#include "kinetic/spatial_dg.hpp"

namespace kinetic {

enum class CollisionKind { boltzmann, bgk };

/// Weak-form collision contribution on the DG space: Gauss collocation of
/// the velocity-space collision operator at order+1 points per element,
/// scaled by the frame's collision factor and divided by the Knudsen number.
class CollisionTerm {
 public:
  /// For the binary operator a precomputed application matrix is built when
  /// it fits options.max_matrix_bytes; otherwise applications fall back to
  /// the matrix-free path. conservation_fix projects the five collision
  /// invariants out of every pointwise application (needs order_v >= 2).
  CollisionTerm(const DGSpace* space, const VelocityBasis* basis,
                CollisionKind kind, double knudsen,
                CollisionOptions options = {}, bool conservation_fix = true);

  CollisionKind kind() const { return kind_; }
  double knudsen() const { return kn_; }
  double beta() const { return beta_; }
  bool conservation_fix() const { return fix_.has_value(); }

  /// Weak collision vector in the given frame, one block per element.
  State apply(const State& c, const AnsatzFrame& frame) const;

 private:
  const DGSpace* space_;
  const VelocityBasis* basis_;
  CollisionKind kind_;
  double kn_;
  double beta_ = 0.0;
  Quad1D xrule_;
  Eigen::MatrixXd phi_;  // modes x collocation points
  std::unique_ptr<BoltzmannOperator> boltzmann_;
  std::optional<ConservationFix> fix_;
};

/// Rebuilds ansatz frames from represented moments: bulk velocity and
/// temperature are evaluated at the smoothing quadrature points, projected
/// onto the continuous space with the gradient penalty, and the frame scale
/// is set to twice the smoothed temperature so local equilibria standardize
/// to the trial-space weight.
class FrameUpdater {
 public:
  FrameUpdater(const DGSpace* space, const VelocityBasis* basis, int cg_order,
               double c_smooth, bool periodic);

  /// Space the produced frames live on; it must outlive them.
  const CGSpace& frame_space() const { return cg_; }
  /// End constraints and penalties are configured on the component
  /// smoothers directly.
  Smoother& velocity_smoother(int d) { return vel_[d]; }
  Smoother& temperature_smoother() { return temp_; }

  /// Frame following the represented moments of c, with zero time rates.
  /// The current frame supplies the standardized-to-physical moment map.
  AnsatzFrame frame_from(const State& c, const AnsatzFrame& current) const;

  /// Frame from analytic fields (initialization), with zero time rates.
  AnsatzFrame frame_from_fields(
      const std::function<Eigen::Vector3d(double)>& velocity,
      const std::function<double(double)>& temperature) const;

 private:
  AnsatzFrame build(const Eigen::MatrixXd* raw_v,
                    const Eigen::MatrixXd& raw_t) const;

  const DGSpace* space_;
  const VelocityBasis* basis_;
  CGSpace cg_;
  std::array<Smoother, 3> vel_;
  Smoother temp_;
  Eigen::MatrixXd phi_;  // modal values at the smoothing sample nodes
};

enum class Scheme { frame_euler, rk4 };

struct IntegratorOptions {
  Scheme scheme = Scheme::frame_euler;
  /// Rebuild the frame every this many steps (1 = every step).
  int frame_update_every = 1;
  /// Freeze the frame entirely (homogeneous runs, reductions, debugging).
  bool fixed_frame = false;
};

/// Per-step diagnostics.
struct StepReport {
  double t = 0.0;
  double dt = 0.0;
  /// Domain totals (mass, momentum, energy) after the step.
  Eigen::Matrix<double, 5, 1> totals = Eigen::Matrix<double, 5, 1>::Zero();
  /// Largest nodal frame changes over the step.
  double shift_delta = 0.0;
  double scale_delta = 0.0;
  /// |invariant sums| of the step's first collision evaluation.
  Eigen::Matrix<double, 5, 1> collision_residuals =
      Eigen::Matrix<double, 5, 1>::Zero();
};

/// Explicit time stepping: a frame-evolving one-stage scheme built around a
/// helper distribution (the reference method), and a fixed-frame classical
/// RK4 whose frame is refreshed once per step by reprojection.
class Integrator {
 public:
  /// collision may be null (transport only); updater may be null only when
  /// the frame is fixed. Frames passed to step() must live on the updater's
  /// frame_space() unless the frame is fixed.
  Integrator(TransportOperator* transport, CollisionTerm* collision,
             FrameUpdater* updater, IntegratorOptions options = {});

  const IntegratorOptions& options() const { return opts_; }
  int steps_taken() const { return steps_; }

  /// Advances state and frame by one step of the selected scheme. Throws on
  /// nonfinite results, degenerate pointwise moments, or a collapsed frame
  /// scale.
  StepReport step(State& c, AnsatzFrame& frame, double t, double tau);

  /// Linear-advection stability bound cfl h / ((p+1) max|speed|) with the
  /// transport speed maximized over the frame's nodal values.
  double stable_dt(const AnsatzFrame& frame, double cfl = 0.5) const;

 private:
  void step_euler(State& c, AnsatzFrame& frame, double tau, bool refresh,
                  StepReport& rep);
  void step_rk4(State& c, AnsatzFrame& frame, double tau, bool refresh,
                StepReport& rep);

  TransportOperator* transport_;
  CollisionTerm* collision_;
  FrameUpdater* updater_;
  IntegratorOptions opts_;
  int steps_ = 0;
};

/// Quadrature approximation of integral f log f over phase space in the
/// given frame; nonpositive nodal values contribute the x log x -> 0 limit.
double entropy_functional(const DGSpace& space, const VelocityBasis& basis,
                          const AnsatzFrame& frame, const State& c);

}  // namespace kinetic
