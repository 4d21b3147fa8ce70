#pragma once

#include <Eigen/Dense>

#include "kinetic/smoother.hpp"

namespace kinetic {

/// Frame data at one spatial point: drift velocity, scale, and their space
/// and time derivatives.
struct FramePoint {
  Eigen::Vector3d shift = Eigen::Vector3d::Zero();
  double scale = 1.0;
  Eigen::Vector3d shift_x = Eigen::Vector3d::Zero();
  double scale_x = 0.0;
  Eigen::Vector3d shift_t = Eigen::Vector3d::Zero();
  double scale_t = 0.0;
};

/// Continuous drift/scale fields defining the local ansatz frame, stored as
/// nodal coefficients on a continuous space together with their time rates.
/// The scale must stay above a positivity floor; violations are hard errors
/// rather than clamps.
class AnsatzFrame {
 public:
  /// shift is dofs x 3 (one column per velocity component), scale is dofs.
  AnsatzFrame(const CGSpace* space, Eigen::MatrixXd shift,
              Eigen::VectorXd scale, double scale_floor = 1e-6);

  /// Spatially constant frame with zero rates.
  static AnsatzFrame uniform(const CGSpace* space,
                             const Eigen::Vector3d& shift, double scale);

  const CGSpace& space() const { return *space_; }
  const Eigen::MatrixXd& shift() const { return shift_; }
  const Eigen::VectorXd& scale() const { return scale_; }
  const Eigen::MatrixXd& shift_rate() const { return shift_rate_; }
  const Eigen::VectorXd& scale_rate() const { return scale_rate_; }
  double scale_floor() const { return scale_floor_; }

  /// Overwrites the rate fields with (next - this) / dt nodal forward
  /// differences.
  void set_rates_toward(const AnsatzFrame& next, double dt);
  void clear_rates();

  /// Values and derivatives at reference coordinate xi of an element.
  FramePoint at(int element, double xi) const;

 private:
  const CGSpace* space_;
  Eigen::MatrixXd shift_;
  Eigen::VectorXd scale_;
  Eigen::MatrixXd shift_rate_;
  Eigen::VectorXd scale_rate_;
  double scale_floor_;
};

}  // namespace kinetic
