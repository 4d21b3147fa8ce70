#include "kinetic/time_integrator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kinetic/frame_transform.hpp"

namespace kinetic {

namespace {

void axpy(State& y, double a, const State& x) {
  for (std::size_t e = 0; e < y.size(); ++e) y[e] += a * x[e];
}

bool all_finite(const State& c) {
  for (const auto& block : c)
    if (!block.allFinite()) return false;
  return true;
}

/// |sum_e sqrt(h) sum_m psi_k(v_m) qc[e](0, m)| for the five invariants:
/// the x-integrated invariant content of a weak collision vector.
const Mesh1D& checked_mesh(const DGSpace* space) {
  if (space == nullptr)
    throw std::invalid_argument("FrameUpdater: null space or basis");
  return space->mesh();
}

Eigen::Matrix<double, 5, 1> invariant_totals(const DGSpace& space,
                                             const VelocityBasis& basis,
                                             const State& qc) {
  Eigen::Matrix<double, 5, 1> out = Eigen::Matrix<double, 5, 1>::Zero();
  const double rt = std::sqrt(space.mesh().h());
  for (const auto& block : qc) {
    const Eigen::VectorXd row = rt * block.row(0).transpose();
    out[0] += row.sum();
    for (int d = 0; d < 3; ++d) out[1 + d] += basis.node_component(d).dot(row);
    out[4] += basis.node_norm2().dot(row);
  }
  return out.cwiseAbs();
}

}  // namespace

CollisionTerm::CollisionTerm(const DGSpace* space, const VelocityBasis* basis,
                             CollisionKind kind, double knudsen,
                             CollisionOptions options, bool conservation_fix)
    : space_(space), basis_(basis), kind_(kind), kn_(knudsen) {
  if (space_ == nullptr || basis_ == nullptr)
    throw std::invalid_argument("CollisionTerm: null space or basis");
  if (!(kn_ > 0.0) || !std::isfinite(kn_))
    throw std::invalid_argument("CollisionTerm: knudsen must be positive");
  xrule_ = gauss_legendre_rule(space_->order() + 1);
  phi_.resize(space_->modes(), xrule_.size());
  Eigen::VectorXd col;
  for (int q = 0; q < xrule_.size(); ++q) {
    space_->basis(xrule_.nodes[q], col);
    phi_.col(q) = col;
  }
  if (kind_ == CollisionKind::boltzmann) {
    beta_ = options.beta;
    boltzmann_ = std::make_unique<BoltzmannOperator>(*basis_, options);
    if (boltzmann_->matrix_bytes() <= options.max_matrix_bytes)
      boltzmann_->build_matrix();
  }
  if (conservation_fix) fix_.emplace(*basis_);
}

State CollisionTerm::apply(const State& c, const AnsatzFrame& frame) const {
  if (static_cast<int>(c.size()) != space_->mesh().elements())
    throw std::invalid_argument("CollisionTerm: state has wrong element count");
  State out = zero_state(*space_, *basis_);
  const double half_h = 0.5 * space_->mesh().h();
  for (std::size_t e = 0; e < c.size(); ++e) {
    for (int q = 0; q < xrule_.size(); ++q) {
      const Eigen::VectorXd g = c[e].transpose() * phi_.col(q);
      Eigen::VectorXd qv;
      if (kind_ == CollisionKind::bgk) {
        qv = bgk_relaxation(*basis_, g);
      } else {
        qv = boltzmann_->has_matrix() ? boltzmann_->apply(g)
                                      : boltzmann_->apply_direct(g);
      }
      if (fix_) qv = fix_->apply(qv);
      const double s = frame.at(static_cast<int>(e), xrule_.nodes[q]).scale;
      const double factor =
          (kind_ == CollisionKind::bgk ? mass_factor(s)
                                       : collision_scaling(s, beta_)) /
          kn_;
      out[e] += (half_h * xrule_.weights[q] * factor) * phi_.col(q) *
                qv.transpose();
    }
  }
  return out;
}

FrameUpdater::FrameUpdater(const DGSpace* space, const VelocityBasis* basis,
                           int cg_order, double c_smooth, bool periodic)
    : space_(space),
      basis_(basis),
      cg_(checked_mesh(space), cg_order, periodic),
      vel_{Smoother(space->mesh(), cg_order, c_smooth, periodic),
           Smoother(space->mesh(), cg_order, c_smooth, periodic),
           Smoother(space->mesh(), cg_order, c_smooth, periodic)},
      temp_(space->mesh(), cg_order, c_smooth, periodic) {
  if (basis_ == nullptr)
    throw std::invalid_argument("FrameUpdater: null space or basis");
  const Quad1D& rule = temp_.rhs_rule();
  phi_.resize(space_->modes(), rule.size());
  Eigen::VectorXd col;
  for (int q = 0; q < rule.size(); ++q) {
    space_->basis(rule.nodes[q], col);
    phi_.col(q) = col;
  }
}

AnsatzFrame FrameUpdater::build(const Eigen::MatrixXd* raw_v,
                                const Eigen::MatrixXd& raw_t) const {
  Eigen::MatrixXd shift(cg_.dofs(), 3);
  for (int d = 0; d < 3; ++d) shift.col(d) = vel_[d].smooth(raw_v[d]);
  const Eigen::VectorXd scale = 2.0 * temp_.smooth(raw_t);
  return AnsatzFrame(&cg_, std::move(shift), scale);
}

AnsatzFrame FrameUpdater::frame_from(const State& c,
                                     const AnsatzFrame& current) const {
  const int elements = space_->mesh().elements();
  if (static_cast<int>(c.size()) != elements)
    throw std::invalid_argument("FrameUpdater: state has wrong element count");
  const Quad1D& rule = temp_.rhs_rule();
  Eigen::MatrixXd raw_v[3];
  for (auto& m : raw_v) m.resize(elements, rule.size());
  Eigen::MatrixXd raw_t(elements, rule.size());
  for (int e = 0; e < elements; ++e) {
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd g = c[e].transpose() * phi_.col(q);
      const MacroscopicState standard = basis_->moments(g);
      const FramePoint fp = current.at(e, rule.nodes[q]);
      const MacroscopicState phys =
          physical_moments(standard, fp.shift, fp.scale);
      for (int d = 0; d < 3; ++d) raw_v[d](e, q) = phys.V[d];
      raw_t(e, q) = phys.T;
    }
  }
  return build(raw_v, raw_t);
}

AnsatzFrame FrameUpdater::frame_from_fields(
    const std::function<Eigen::Vector3d(double)>& velocity,
    const std::function<double(double)>& temperature) const {
  const int elements = space_->mesh().elements();
  const Quad1D& rule = temp_.rhs_rule();
  Eigen::MatrixXd raw_v[3];
  for (auto& m : raw_v) m.resize(elements, rule.size());
  Eigen::MatrixXd raw_t(elements, rule.size());
  for (int e = 0; e < elements; ++e) {
    for (int q = 0; q < rule.size(); ++q) {
      const double x = space_->mesh().to_physical(e, rule.nodes[q]);
      const Eigen::Vector3d v = velocity(x);
      for (int d = 0; d < 3; ++d) raw_v[d](e, q) = v[d];
      raw_t(e, q) = temperature(x);
    }
  }
  return build(raw_v, raw_t);
}

Integrator::Integrator(TransportOperator* transport, CollisionTerm* collision,
                       FrameUpdater* updater, IntegratorOptions options)
    : transport_(transport),
      collision_(collision),
      updater_(updater),
      opts_(options) {
  if (transport_ == nullptr)
    throw std::invalid_argument("Integrator: null transport operator");
  if (!opts_.fixed_frame && updater_ == nullptr)
    throw std::invalid_argument(
        "Integrator: frame updates need a frame updater");
  if (opts_.frame_update_every < 1)
    throw std::invalid_argument(
        "Integrator: frame_update_every must be >= 1");
}

StepReport Integrator::step(State& c, AnsatzFrame& frame, double t,
                            double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("Integrator: step size must be positive");
  StepReport rep;
  rep.t = t;
  rep.dt = tau;
  const bool refresh =
      !opts_.fixed_frame && (steps_ + 1) % opts_.frame_update_every == 0;
  if (opts_.scheme == Scheme::frame_euler)
    step_euler(c, frame, tau, refresh, rep);
  else
    step_rk4(c, frame, tau, refresh, rep);
  ++steps_;
  if (!all_finite(c))
    throw std::runtime_error(
        "Integrator: time step produced nonfinite coefficients");
  rep.totals =
      conserved_totals(transport_->space(), transport_->basis(), frame, c);
  return rep;
}

void Integrator::step_euler(State& c, AnsatzFrame& frame, double tau,
                            bool refresh, StepReport& rep) {
  transport_->set_frame(&frame);
  State rhs = transport_->apply_mass(c);
  axpy(rhs, -tau, transport_->apply_flux(c));
  if (collision_ != nullptr) {
    const State qc = collision_->apply(c, frame);
    rep.collision_residuals =
        invariant_totals(transport_->space(), transport_->basis(), qc);
    axpy(rhs, tau, qc);
  }
  if (!refresh) {
    // Frozen frame: the weighted mass is unchanged and the frame rates
    // vanish, so the helper distribution is the update itself.
    c = transport_->solve_mass(rhs);
    return;
  }
  const State h = transport_->solve_mass(rhs);
  AnsatzFrame next = updater_->frame_from(h, frame);
  rep.shift_delta = (next.shift() - frame.shift()).cwiseAbs().maxCoeff();
  rep.scale_delta = (next.scale() - frame.scale()).cwiseAbs().maxCoeff();
  frame.set_rates_toward(next, tau);
  transport_->set_frame(&frame);
  axpy(rhs, tau, transport_->apply_time_coupling(c));
  frame = next;
  transport_->set_frame(&frame);
  c = transport_->solve_mass(rhs);
}

void Integrator::step_rk4(State& c, AnsatzFrame& frame, double tau,
                          bool refresh, StepReport& rep) {
  transport_->set_frame(&frame);
  bool first = true;
  const auto rhs_of = [&](const State& y) {
    State r = transport_->apply_flux(y);
    for (auto& block : r) block = -block;
    if (collision_ != nullptr) {
      const State qy = collision_->apply(y, frame);
      if (first) {
        rep.collision_residuals =
            invariant_totals(transport_->space(), transport_->basis(), qy);
        first = false;
      }
      axpy(r, 1.0, qy);
    }
    return transport_->solve_mass(r);
  };
  const State k1 = rhs_of(c);
  State y = c;
  axpy(y, 0.5 * tau, k1);
  const State k2 = rhs_of(y);
  y = c;
  axpy(y, 0.5 * tau, k2);
  const State k3 = rhs_of(y);
  y = c;
  axpy(y, tau, k3);
  const State k4 = rhs_of(y);
  axpy(c, tau / 6.0, k1);
  axpy(c, tau / 3.0, k2);
  axpy(c, tau / 3.0, k3);
  axpy(c, tau / 6.0, k4);
  if (!refresh) return;
  AnsatzFrame next = updater_->frame_from(c, frame);
  rep.shift_delta = (next.shift() - frame.shift()).cwiseAbs().maxCoeff();
  rep.scale_delta = (next.scale() - frame.scale()).cwiseAbs().maxCoeff();
  if (rep.shift_delta != 0.0 || rep.scale_delta != 0.0)
    c = reframe_state(transport_->space(), transport_->basis(), c, frame,
                      next);
  frame = next;
}

double Integrator::stable_dt(const AnsatzFrame& frame, double cfl) const {
  const double vmax = transport_->basis().rule1d().nodes.back();
  double speed = 0.0;
  for (int i = 0; i < frame.scale().size(); ++i)
    speed = std::max(speed, std::sqrt(frame.scale()[i]) * vmax +
                                std::abs(frame.shift()(i, 0)));
  if (!(speed > 0.0)) return std::numeric_limits<double>::infinity();
  return cfl * transport_->space().mesh().h() /
         ((transport_->space().order() + 1) * speed);
}

double entropy_functional(const DGSpace& space, const VelocityBasis& basis,
                          const AnsatzFrame& frame, const State& c) {
  const Quad1D rule = gauss_legendre_rule(space.order() + 2);
  Eigen::MatrixXd phi(space.modes(), rule.size());
  Eigen::VectorXd col;
  for (int q = 0; q < rule.size(); ++q) {
    space.basis(rule.nodes[q], col);
    phi.col(q) = col;
  }
  const Eigen::VectorXd& w3 = basis.mass_diagonal();
  const Eigen::VectorXd& n2 = basis.node_norm2();
  const double half_h = 0.5 * space.mesh().h();
  double total = 0.0;
  for (std::size_t e = 0; e < c.size(); ++e) {
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd g = c[e].transpose() * phi.col(q);
      double inner = 0.0;
      for (int m = 0; m < g.size(); ++m)
        if (g[m] > 0.0) inner += w3[m] * g[m] * (std::log(g[m]) - n2[m]);
      const double s = frame.at(static_cast<int>(e), rule.nodes[q]).scale;
      total += half_h * rule.weights[q] * s * std::sqrt(s) * inner;
    }
  }
  return total;
}

}  // namespace kinetic
