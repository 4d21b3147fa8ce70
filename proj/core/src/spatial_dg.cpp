#include "kinetic/spatial_dg.hpp"

#include <cmath>
#include <stdexcept>

#include "kinetic/frame_transform.hpp"

namespace kinetic {

namespace {

/// Nodal coefficients of the Maxwellian with physical data (rho, V, T),
/// expressed in the frame at the boundary point via the inverse frame map.
Eigen::VectorXd exterior_maxwellian(const VelocityBasis& basis,
                                    const BoundaryCondition& bc,
                                    const FramePoint& fp) {
  const double srt = std::sqrt(fp.scale);
  return basis.project_maxwellian(bc.rho / (fp.scale * srt),
                                  (bc.V - fp.shift) / srt, bc.T / fp.scale);
}

/// Unnormalized wall Maxwellian exp(-|v - V_bnd|^2 / (2 T_bnd)) in physical
/// velocity, as nodal coefficients in the frame at the wall.
Eigen::VectorXd wall_maxwellian(const VelocityBasis& basis,
                                const BoundaryCondition& bc,
                                const FramePoint& fp) {
  const double srt = std::sqrt(fp.scale);
  Eigen::VectorXd out(basis.size());
  for (int m = 0; m < basis.size(); ++m) {
    const Eigen::Vector3d u = srt * basis.node(m) + fp.shift - bc.V;
    out[m] = std::exp(basis.node_norm2()[m] - u.squaredNorm() / (2.0 * bc.T));
  }
  return out;
}

}  // namespace

State zero_state(const DGSpace& space, const VelocityBasis& basis) {
  return State(space.mesh().elements(),
               Eigen::MatrixXd::Zero(space.modes(), basis.size()));
}

State reframe_state(const DGSpace& space, const VelocityBasis& basis,
                    const State& c, const AnsatzFrame& from,
                    const AnsatzFrame& to) {
  const Mesh1D& mesh = space.mesh();
  if (static_cast<int>(c.size()) != mesh.elements())
    throw std::invalid_argument("reframe_state: state size mismatch");
  const Quad1D rule = gauss_legendre_rule(space.modes());
  Eigen::MatrixXd phi(space.modes(), rule.size());
  Eigen::VectorXd tmp;
  for (int q = 0; q < rule.size(); ++q) {
    space.basis(rule.nodes[q], tmp);
    phi.col(q) = tmp;
  }
  State out(c.size());
  for (int e = 0; e < mesh.elements(); ++e) {
    Eigen::MatrixXd blk = Eigen::MatrixXd::Zero(space.modes(), basis.size());
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd g = c[e].transpose() * phi.col(q);
      const FramePoint a = from.at(e, rule.nodes[q]);
      const FramePoint b = to.at(e, rule.nodes[q]);
      const Eigen::VectorXd gn =
          reframe_nodal(basis, g, a.shift, a.scale, b.shift, b.scale);
      blk += (0.5 * mesh.h() * rule.weights[q]) * phi.col(q) * gn.transpose();
    }
    out[e] = std::move(blk);
  }
  return out;
}

Eigen::Matrix<double, 5, 1> conserved_totals(const DGSpace& space,
                                             const VelocityBasis& basis,
                                             const AnsatzFrame& frame,
                                             const State& c) {
  const Mesh1D& mesh = space.mesh();
  if (static_cast<int>(c.size()) != mesh.elements())
    throw std::invalid_argument("conserved_totals: state size mismatch");
  const Quad1D rule = gauss_legendre_rule(space.order() + 2);
  const Eigen::VectorXd& w3 = basis.mass_diagonal();
  Eigen::Matrix<double, 5, 1> totals = Eigen::Matrix<double, 5, 1>::Zero();
  Eigen::VectorXd phi;
  for (int e = 0; e < mesh.elements(); ++e)
    for (int q = 0; q < rule.size(); ++q) {
      space.basis(rule.nodes[q], phi);
      const Eigen::VectorXd g = c[e].transpose() * phi;
      const double m0 = w3.dot(g);
      Eigen::Vector3d m1;
      for (int d = 0; d < 3; ++d)
        m1[d] = w3.cwiseProduct(basis.node_component(d)).dot(g);
      const double e2 = 0.5 * w3.cwiseProduct(basis.node_norm2()).dot(g);
      const FramePoint fp = frame.at(e, rule.nodes[q]);
      const double srt = std::sqrt(fp.scale);
      const double jw =
          0.5 * mesh.h() * rule.weights[q] * fp.scale * srt;  // scale^{3/2}
      totals[0] += jw * m0;
      for (int d = 0; d < 3; ++d)
        totals[1 + d] += jw * (srt * m1[d] + fp.shift[d] * m0);
      totals[4] += jw * (fp.scale * e2 + srt * fp.shift.dot(m1) +
                         0.5 * fp.shift.squaredNorm() * m0);
    }
  return totals;
}

TransportOperator::TransportOperator(const DGSpace* space,
                                     const VelocityBasis* basis,
                                     BoundaryCondition left,
                                     BoundaryCondition right)
    : space_(space), basis_(basis), bc_{left, right} {
  if (space_ == nullptr || basis_ == nullptr)
    throw std::invalid_argument("TransportOperator: null space or basis");
  const bool lp = left.kind == BCKind::periodic;
  const bool rp = right.kind == BCKind::periodic;
  if (lp != rp)
    throw std::invalid_argument(
        "TransportOperator: periodic ends must come in pairs");
  periodic_ = lp;
  for (const BoundaryCondition& bc : bc_) {
    if (bc.kind == BCKind::diffuse && !(bc.T > 0.0))
      throw std::invalid_argument(
          "TransportOperator: diffuse wall needs a positive temperature");
    if ((bc.kind == BCKind::inflow || bc.kind == BCKind::outflow) &&
        !(bc.rho > 0.0 && bc.T > 0.0))
      throw std::invalid_argument(
          "TransportOperator: inflow/outflow data needs rho > 0 and T > 0");
  }

  xrule_ = gauss_legendre_rule(space_->order() + 2);
  phi_.resize(space_->modes(), xrule_.size());
  dphi_.resize(space_->modes(), xrule_.size());
  Eigen::VectorXd tmp;
  for (int q = 0; q < xrule_.size(); ++q) {
    space_->basis(xrule_.nodes[q], tmp);
    phi_.col(q) = tmp;
    space_->basis_derivative(xrule_.nodes[q], tmp);
    dphi_.col(q) = tmp;
  }

  const int n = basis_->n1d();
  flip_.resize(basis_->size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        flip_[basis_->index(i, j, k)] = basis_->index(n - 1 - i, j, k);
}

void TransportOperator::set_frame(const AnsatzFrame* frame) {
  if (frame == nullptr)
    throw std::invalid_argument("TransportOperator: null frame");
  const Mesh1D& mesh = space_->mesh();
  const Mesh1D& fmesh = frame->space().mesh();
  if (fmesh.elements() != mesh.elements() || fmesh.x_min() != mesh.x_min() ||
      fmesh.x_max() != mesh.x_max())
    throw std::invalid_argument(
        "TransportOperator: frame lives on a different mesh");
  frame_ = frame;

  const int elements = mesh.elements();
  const double h = mesh.h();
  const double vmax = basis_->rule1d().nodes.back();

  vol_.assign(elements, std::vector<VolumePoint>(xrule_.size()));
  mass_x_.resize(elements);
  llts_.resize(elements);
  max_speed_ = 0.0;
  for (int e = 0; e < elements; ++e) {
    Eigen::MatrixXd mx =
        Eigen::MatrixXd::Zero(space_->modes(), space_->modes());
    for (int q = 0; q < xrule_.size(); ++q) {
      const FramePoint fp = frame->at(e, xrule_.nodes[q]);
      VolumePoint& vp = vol_[e][q];
      const double srt = std::sqrt(fp.scale);
      vp.jw = 0.5 * h * xrule_.weights[q] * fp.scale * srt;
      vp.sqrt_s = srt;
      vp.shift1 = fp.shift[0];
      vp.avec = fp.shift_t / srt;
      vp.ascl = fp.scale_t / (2.0 * fp.scale);
      vp.bvec = fp.shift_x / srt;
      vp.bscl = fp.scale_x / (2.0 * fp.scale);
      mx += vp.jw * phi_.col(q) * phi_.col(q).transpose();
      max_speed_ = std::max({max_speed_, std::abs(srt * vmax + vp.shift1),
                             std::abs(-srt * vmax + vp.shift1)});
    }
    mass_x_[e] = mx;
    llts_[e].compute(mx);
    if (llts_[e].info() != Eigen::Success)
      throw std::runtime_error(
          "TransportOperator: weighted mass block is not positive definite");
  }

  facet_.resize(elements + 1);
  for (int f = 0; f <= elements; ++f) {
    const FramePoint fp =
        (f == 0) ? frame->at(0, -1.0) : frame->at(f - 1, 1.0);
    const double srt = std::sqrt(fp.scale);
    facet_[f] = {fp.scale * srt, srt, fp.shift[0]};
    max_speed_ = std::max({max_speed_, std::abs(srt * vmax + fp.shift[0]),
                           std::abs(-srt * vmax + fp.shift[0])});
  }

  for (int side = 0; side < 2; ++side) {
    const FramePoint fp =
        (side == 0) ? frame->at(0, -1.0) : frame->at(elements - 1, 1.0);
    const BCKind kind = bc_[side].kind;
    if (kind == BCKind::inflow || kind == BCKind::outflow)
      exterior_maxwellian_[side] = exterior_maxwellian(*basis_, bc_[side], fp);
    else if (kind == BCKind::diffuse)
      wall_maxwellian_[side] = wall_maxwellian(*basis_, bc_[side], fp);
  }
}

void TransportOperator::check_ready(const State& c) const {
  if (frame_ == nullptr)
    throw std::logic_error("TransportOperator: set_frame has not been called");
  if (static_cast<int>(c.size()) != space_->mesh().elements())
    throw std::invalid_argument("TransportOperator: state size mismatch");
  for (const Eigen::MatrixXd& blk : c)
    if (blk.rows() != space_->modes() || blk.cols() != basis_->size())
      throw std::invalid_argument("TransportOperator: block shape mismatch");
}

State TransportOperator::apply_mass(const State& c) const {
  check_ready(c);
  const Eigen::VectorXd& w3 = basis_->mass_diagonal();
  State out(c.size());
  for (size_t e = 0; e < c.size(); ++e)
    out[e] = mass_x_[e] * c[e] * w3.asDiagonal();
  return out;
}

State TransportOperator::solve_mass(const State& r) const {
  check_ready(r);
  const Eigen::VectorXd inv = basis_->mass_diagonal().cwiseInverse();
  State out(r.size());
  for (size_t e = 0; e < r.size(); ++e)
    out[e] = llts_[e].solve(r[e]) * inv.asDiagonal();
  return out;
}

double TransportOperator::mass_condition(int element) const {
  if (frame_ == nullptr)
    throw std::logic_error("TransportOperator: set_frame has not been called");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mass_x_.at(element));
  return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
}

void TransportOperator::add_gradient_coupling(const Eigen::VectorXd& u,
                                              const Eigen::Vector3d& cvec,
                                              double cscl,
                                              Eigen::VectorXd& out) const {
  Eigen::VectorXd z(u.size());
  for (int d = 0; d < 3; ++d) {
    if (cvec[d] == 0.0 && cscl == 0.0) continue;
    z = ((cvec[d] + cscl * basis_->node_component(d).array()) * u.array())
            .matrix();
    basis_->add_diff_transpose(d, z, 1.0, out);
  }
}

Eigen::VectorXd TransportOperator::exterior_trace(
    int side, const Eigen::VectorXd& interior) const {
  const int ndof = basis_->size();
  switch (bc_[side].kind) {
    case BCKind::inflow:
    case BCKind::outflow:
      return exterior_maxwellian_[side];
    case BCKind::specular: {
      Eigen::VectorXd out(ndof);
      for (int m = 0; m < ndof; ++m) out[m] = interior[flip_[m]];
      return out;
    }
    case BCKind::diffuse: {
      const FacetPoint& fp =
          facet_[side == 0 ? 0 : space_->mesh().elements()];
      const double normal = (side == 0) ? -1.0 : 1.0;
      const Eigen::VectorXd& w3 = basis_->mass_diagonal();
      const Eigen::VectorXd& v1 = basis_->node_component(0);
      const Eigen::VectorXd& wall = wall_maxwellian_[side];
      double outgoing = 0.0;
      double incoming = 0.0;
      for (int m = 0; m < ndof; ++m) {
        const double sn = normal * (fp.sqrt_s * v1[m] + fp.shift1);
        if (sn > 0.0)
          outgoing += w3[m] * sn * interior[m];
        else
          incoming += w3[m] * sn * wall[m];
      }
      if (!(incoming < 0.0))
        throw std::runtime_error(
            "TransportOperator: diffuse wall has no incoming flux");
      return (-outgoing / incoming) * wall;
    }
    case BCKind::periodic:
      break;
  }
  throw std::logic_error("TransportOperator: periodic end has no exterior");
}

State TransportOperator::apply_flux(const State& c) const {
  check_ready(c);
  const int elements = space_->mesh().elements();
  const int ndof = basis_->size();
  const Eigen::VectorXd& w3 = basis_->mass_diagonal();
  const Eigen::VectorXd& v1 = basis_->node_component(0);
  State out = zero_state(*space_, *basis_);

  Eigen::MatrixXd gl(ndof, elements), gr(ndof, elements);
  for (int e = 0; e < elements; ++e) {
    gl.col(e) = c[e].transpose() * space_->trace_left();
    gr.col(e) = c[e].transpose() * space_->trace_right();
  }

  Eigen::VectorXd lv, rv, flux(ndof);
  for (int f = 0; f <= elements; ++f) {
    if (f == 0) {
      rv = gl.col(0);
      lv = periodic_ ? Eigen::VectorXd(gr.col(elements - 1))
                     : exterior_trace(0, rv);
    } else if (f == elements) {
      lv = gr.col(elements - 1);
      rv = periodic_ ? Eigen::VectorXd(gl.col(0)) : exterior_trace(1, lv);
    } else {
      lv = gr.col(f - 1);
      rv = gl.col(f);
    }
    const FacetPoint& fp = facet_[f];
    for (int m = 0; m < ndof; ++m) {
      const double s = fp.sqrt_s * v1[m] + fp.shift1;
      const double up = s > 0.0 ? lv[m] : (s < 0.0 ? rv[m] : 0.5 * (lv[m] + rv[m]));
      flux[m] = fp.jac * w3[m] * s * up;
    }
    if (f > 0) out[f - 1] += space_->trace_right() * flux.transpose();
    if (f < elements) out[f] -= space_->trace_left() * flux.transpose();
  }

  Eigen::VectorXd g, u, y;
  for (int e = 0; e < elements; ++e)
    for (int q = 0; q < xrule_.size(); ++q) {
      const VolumePoint& vp = vol_[e][q];
      g = c[e].transpose() * phi_.col(q);
      u = (w3.array() * (vp.sqrt_s * v1.array() + vp.shift1) * g.array())
              .matrix();
      out[e] -= vp.jw * dphi_.col(q) * u.transpose();
      y = Eigen::VectorXd::Zero(ndof);
      add_gradient_coupling(u, vp.bvec, vp.bscl, y);
      out[e] += vp.jw * phi_.col(q) * y.transpose();
    }
  return out;
}

State TransportOperator::apply_time_coupling(const State& c) const {
  check_ready(c);
  const Eigen::VectorXd& w3 = basis_->mass_diagonal();
  State out = zero_state(*space_, *basis_);
  Eigen::VectorXd g, u, y;
  for (size_t e = 0; e < c.size(); ++e)
    for (int q = 0; q < xrule_.size(); ++q) {
      const VolumePoint& vp = vol_[e][q];
      if (vp.avec.isZero(0.0) && vp.ascl == 0.0) continue;
      g = c[e].transpose() * phi_.col(q);
      u = w3.cwiseProduct(g);
      y = Eigen::VectorXd::Zero(basis_->size());
      add_gradient_coupling(u, vp.avec, vp.ascl, y);
      out[e] -= vp.jw * phi_.col(q) * y.transpose();
    }
  return out;
}

double TransportOperator::boundary_mass_flux(const State& c) const {
  check_ready(c);
  if (periodic_) return 0.0;
  const int elements = space_->mesh().elements();
  const Eigen::VectorXd& w3 = basis_->mass_diagonal();
  const Eigen::VectorXd& v1 = basis_->node_component(0);
  double net = 0.0;
  for (int side = 0; side < 2; ++side) {
    const int f = (side == 0) ? 0 : elements;
    const Eigen::VectorXd interior =
        (side == 0) ? Eigen::VectorXd(c[0].transpose() * space_->trace_left())
                    : Eigen::VectorXd(c[elements - 1].transpose() *
                                      space_->trace_right());
    const Eigen::VectorXd exterior = exterior_trace(side, interior);
    const FacetPoint& fp = facet_[f];
    const Eigen::VectorXd& lv = (side == 0) ? exterior : interior;
    const Eigen::VectorXd& rv = (side == 0) ? interior : exterior;
    double sum = 0.0;
    for (int m = 0; m < basis_->size(); ++m) {
      const double s = fp.sqrt_s * v1[m] + fp.shift1;
      const double up = s > 0.0 ? lv[m] : (s < 0.0 ? rv[m] : 0.5 * (lv[m] + rv[m]));
      sum += fp.jac * w3[m] * s * up;
    }
    net += (side == 0) ? -sum : sum;
  }
  return net;
}

double TransportOperator::max_speed() const {
  if (frame_ == nullptr)
    throw std::logic_error("TransportOperator: set_frame has not been called");
  return max_speed_;
}

}  // namespace kinetic
