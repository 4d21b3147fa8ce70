#include "kinetic/frame.hpp"

#include <stdexcept>
#include <utility>

namespace kinetic {

AnsatzFrame::AnsatzFrame(const CGSpace* space, Eigen::MatrixXd shift,
                         Eigen::VectorXd scale, double scale_floor)
    : space_(space),
      shift_(std::move(shift)),
      scale_(std::move(scale)),
      scale_floor_(scale_floor) {
  if (space_ == nullptr)
    throw std::invalid_argument("AnsatzFrame: space must not be null");
  if (shift_.rows() != space_->dofs() || shift_.cols() != 3 ||
      scale_.size() != space_->dofs())
    throw std::invalid_argument(
        "AnsatzFrame: field sizes do not match the space");
  if (!(scale_.array() > scale_floor_).all())
    throw std::domain_error("AnsatzFrame: scale fell below the floor " +
                            std::to_string(scale_floor_));
  shift_rate_ = Eigen::MatrixXd::Zero(shift_.rows(), 3);
  scale_rate_ = Eigen::VectorXd::Zero(scale_.size());
}

AnsatzFrame AnsatzFrame::uniform(const CGSpace* space,
                                 const Eigen::Vector3d& shift, double scale) {
  if (space == nullptr)
    throw std::invalid_argument("AnsatzFrame: space must not be null");
  const int n = space->dofs();
  Eigen::MatrixXd sh(n, 3);
  sh.rowwise() = shift.transpose();
  return AnsatzFrame(space, sh, Eigen::VectorXd::Constant(n, scale));
}

void AnsatzFrame::set_rates_toward(const AnsatzFrame& next, double dt) {
  if (next.space_ != space_)
    throw std::invalid_argument("AnsatzFrame: rate target uses another space");
  if (!(dt > 0.0))
    throw std::invalid_argument("AnsatzFrame: dt must be positive");
  shift_rate_ = (next.shift_ - shift_) / dt;
  scale_rate_ = (next.scale_ - scale_) / dt;
}

void AnsatzFrame::clear_rates() {
  shift_rate_.setZero();
  scale_rate_.setZero();
}

FramePoint AnsatzFrame::at(int element, double xi) const {
  const int nloc = space_->nodes_per_element();
  Eigen::VectorXd shp, der;
  space_->shape(xi, shp);
  space_->shape_derivative(xi, der);
  der *= 2.0 / space_->mesh().h();

  FramePoint p;
  p.shift.setZero();
  p.scale = 0.0;
  p.shift_x.setZero();
  p.scale_x = 0.0;
  p.shift_t.setZero();
  p.scale_t = 0.0;
  for (int l = 0; l < nloc; ++l) {
    const int g = space_->global_index(element, l);
    for (int d = 0; d < 3; ++d) {
      p.shift[d] += shift_(g, d) * shp[l];
      p.shift_x[d] += shift_(g, d) * der[l];
      p.shift_t[d] += shift_rate_(g, d) * shp[l];
    }
    p.scale += scale_[g] * shp[l];
    p.scale_x += scale_[g] * der[l];
    p.scale_t += scale_rate_[g] * shp[l];
  }
  if (!(p.scale > scale_floor_))
    throw std::domain_error("AnsatzFrame: scale fell below the floor " +
                            std::to_string(scale_floor_));
  return p;
}

}  // namespace kinetic
