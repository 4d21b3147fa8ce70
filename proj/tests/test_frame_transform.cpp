#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "kinetic/frame_transform.hpp"
#include "kinetic/velocity_basis.hpp"
#include "oracles.hpp"

using kinetic::MacroscopicState;
using kinetic::VelocityBasis;

namespace {

MacroscopicState random_state(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MacroscopicState s;
  s.rho = 2.0 + u(rng);
  s.V = Eigen::Vector3d{u(rng), u(rng), u(rng)};
  Eigen::Matrix3d A;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = u(rng);
  s.P = A * A.transpose() + 0.5 * Eigen::Matrix3d::Identity();
  s.p = s.P.trace() / 3.0;
  s.T = s.p / s.rho;
  s.E = 3.0 + u(rng);
  s.q = Eigen::Vector3d{u(rng), u(rng), u(rng)};
  return s;
}

void check_close(const MacroscopicState& a, const MacroscopicState& b,
                 double tol) {
  CHECK(a.rho == doctest::Approx(b.rho).epsilon(tol));
  CHECK((a.V - b.V).norm() <= tol * (1.0 + b.V.norm()));
  CHECK(a.E == doctest::Approx(b.E).epsilon(tol));
  CHECK((a.P - b.P).norm() <= tol * b.P.norm());
  CHECK(a.p == doctest::Approx(b.p).epsilon(tol));
  CHECK(a.T == doctest::Approx(b.T).epsilon(tol));
  CHECK((a.q - b.q).norm() <= tol * (1.0 + b.q.norm()));
}

}  // namespace

TEST_SUITE("frame_transform") {

TEST_CASE("identity frame leaves moments unchanged") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const MacroscopicState s = random_state(rng);
    check_close(kinetic::physical_moments(s, Eigen::Vector3d::Zero(), 1.0), s,
                1e-15);
    check_close(kinetic::standardized_moments(s, Eigen::Vector3d::Zero(), 1.0),
                s, 1e-15);
  }
}

TEST_CASE("maxwellian moments map to shifted scaled maxwellian moments") {
  // A Maxwellian with parameters (rho, Vs, Ts) in the standardized variable
  // corresponds, after u = sqrt(S) v + V, to a Maxwellian with parameters
  // (S^{3/2} rho, sqrt(S) Vs + V, S Ts). Every output field, including the
  // heat-flux vector, must match the closed-form moments of the latter.
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  std::uniform_real_distribution<double> pos(0.3, 2.5);
  for (int trial = 0; trial < 50; ++trial) {
    const double rho_s = pos(rng);
    const double T_s = pos(rng);
    const Eigen::Vector3d V_s{u(rng), u(rng), u(rng)};
    const Eigen::Vector3d V{u(rng), u(rng), u(rng)};
    const double S = pos(rng);

    const MacroscopicState mapped = kinetic::physical_moments(
        oracle::maxwellian_moments(rho_s, V_s, T_s), V, S);
    const MacroscopicState expected = oracle::maxwellian_moments(
        std::pow(S, 1.5) * rho_s, std::sqrt(S) * V_s + V, S * T_s);
    check_close(mapped, expected, 1e-12);
  }
}

TEST_CASE("worked example: flat coefficients in a (V, 4) frame") {
  // g == 1 has standardized moments rho = pi^{3/2}, V = 0, T = 1/2. In a
  // frame with shift V and scale S = 4 this is the Maxwellian with
  // rho = 8 pi^{3/2}, mean V, temperature 2.
  VelocityBasis basis(3);
  const Eigen::VectorXd flat = Eigen::VectorXd::Ones(basis.size());
  const Eigen::Vector3d V{0.3, -0.2, 0.1};
  const MacroscopicState mapped =
      kinetic::physical_moments(basis.moments(flat), V, 4.0);
  const double pi32 = std::pow(M_PI, 1.5);
  CHECK(mapped.rho == doctest::Approx(8.0 * pi32).epsilon(1e-13));
  CHECK((mapped.V - V).norm() < 1e-13);
  CHECK(mapped.T == doctest::Approx(2.0).epsilon(1e-13));
  check_close(mapped, oracle::maxwellian_moments(8.0 * pi32, V, 2.0), 1e-12);
}

TEST_CASE("physical and standardized maps are inverse") {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.2, 3.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const MacroscopicState s = random_state(rng);
    const Eigen::Vector3d V{u(rng), u(rng), u(rng)};
    const double S = pos(rng);
    check_close(kinetic::standardized_moments(
                    kinetic::physical_moments(s, V, S), V, S),
                s, 1e-13);
    check_close(kinetic::physical_moments(
                    kinetic::standardized_moments(s, V, S), V, S),
                s, 1e-13);
  }
}

TEST_CASE("moment map matches brute-force change-of-variables quadrature") {
  const int N = 5;
  VelocityBasis basis(N);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Eigen::VectorXd g(basis.size());
  for (int m = 0; m < basis.size(); ++m) g[m] = 1.0 + u(rng);
  const Eigen::Vector3d V{0.3, -0.2, 0.1};
  const double S = 1.7;
  const MacroscopicState lib = kinetic::physical_moments(basis.moments(g), V, S);
  const MacroscopicState ref =
      oracle::physical_moments_by_quadrature(basis, g, V, S, N + 5);
  // Measured 2.3e-15 for this seed; both sides integrate the same polynomial
  // exactly, so only roundoff separates them.
  check_close(lib, ref, 1e-12);
}

TEST_CASE("collision scaling and mass factor") {
  CHECK(kinetic::collision_scaling(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(kinetic::collision_scaling(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(kinetic::collision_scaling(4.0, 0.0) == doctest::Approx(64.0));
  CHECK(kinetic::collision_scaling(4.0, 1.0) == doctest::Approx(128.0));
  CHECK(kinetic::collision_scaling(0.25, 0.0) == doctest::Approx(0.015625));
  CHECK(kinetic::mass_factor(1.0) == doctest::Approx(1.0));
  CHECK(kinetic::mass_factor(4.0) == doctest::Approx(8.0));
  CHECK(kinetic::mass_factor(0.25) == doctest::Approx(0.125));
  CHECK_THROWS_AS(kinetic::collision_scaling(0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(kinetic::collision_scaling(-1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(kinetic::collision_scaling(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(kinetic::mass_factor(0.0), std::invalid_argument);
  CHECK_THROWS_AS(
      kinetic::physical_moments(MacroscopicState{}, Eigen::Vector3d::Zero(),
                                0.0),
      std::invalid_argument);
}

TEST_CASE("transformed velocity") {
  const Eigen::Vector3d v{1.0, -2.0, 0.5};
  const Eigen::Vector3d V{0.1, 0.2, 0.3};
  const Eigen::Vector3d u = kinetic::transformed_velocity(v, V, 4.0);
  CHECK((u - (2.0 * v + V)).norm() < 1e-15);
}

TEST_CASE("reframe to the same frame is the identity") {
  VelocityBasis basis(4);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd g(basis.size());
  for (int m = 0; m < basis.size(); ++m) g[m] = u(rng);
  const Eigen::Vector3d V{0.4, -0.3, 0.2};
  const double S = 1.6;
  const Eigen::VectorXd h = kinetic::reframe_nodal(basis, g, V, S, V, S);
  CHECK((h - g).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("maxwellian reframed into its matched frame becomes flat") {
  // A Maxwellian with mean V0 and temperature T0, expanded in the unit frame,
  // reframed into the frame (V0, 2 T0), collocates to the constant
  // rho0 / (2 pi T0)^{3/2}. The residual is the interpolation error of the
  // unit-frame expansion sampled between its nodes; measured max-node errors
  // (relative to the flat value): 2.07e-2 (N=4), 9.43e-3 (N=6), 4.50e-3 (N=8).
  const double rho0 = 1.3, T0 = 0.45;
  const Eigen::Vector3d V0{0.2, -0.1, 0.05};
  const double flat = rho0 / std::pow(2.0 * M_PI * T0, 1.5);
  double prev = std::numeric_limits<double>::infinity();
  for (int N : {4, 6, 8}) {
    VelocityBasis basis(N);
    const Eigen::VectorXd g = basis.project_maxwellian(rho0, V0, T0);
    const Eigen::VectorXd h = kinetic::reframe_nodal(
        basis, g, Eigen::Vector3d::Zero(), 1.0, V0, 2.0 * T0);
    double err = 0.0;
    for (int m = 0; m < basis.size(); ++m)
      err = std::max(err, std::abs(h[m] - flat));
    err /= flat;
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-2);
}

TEST_CASE("reframe roundtrip error decays with resolution") {
  // Unit frame -> (V1, 1.2) -> unit frame; the distribution is sampled off
  // its nodes once per leg, so the roundtrip defect is interpolation-limited.
  // Measured weighted-L2 relative errors: 1.89e-3 (N=4), 1.79e-4 (N=6),
  // 2.02e-5 (N=8).
  const Eigen::Vector3d V1{0.15, -0.1, 0.05};
  const double S1 = 1.2;
  double prev = std::numeric_limits<double>::infinity();
  for (int N : {4, 6, 8}) {
    VelocityBasis basis(N);
    const Eigen::VectorXd g =
        basis.project_maxwellian(1.2, Eigen::Vector3d{0.1, 0.0, -0.05}, 0.55);
    const Eigen::VectorXd mid =
        kinetic::reframe_nodal(basis, g, Eigen::Vector3d::Zero(), 1.0, V1, S1);
    const Eigen::VectorXd back =
        kinetic::reframe_nodal(basis, mid, V1, S1, Eigen::Vector3d::Zero(), 1.0);
    const Eigen::VectorXd w3 = basis.mass_diagonal();
    double num = 0.0, den = 0.0;
    for (int m = 0; m < basis.size(); ++m) {
      num += w3[m] * (back[m] - g[m]) * (back[m] - g[m]);
      den += w3[m] * g[m] * g[m];
    }
    const double err = std::sqrt(num / den);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("physical moments agree before and after a nodal reframe") {
  // The same underlying distribution expressed in two frames must report the
  // same physical moments, up to the reframe interpolation error. Measured
  // combined relative errors: 3.05e-4 (N=4), 9.18e-6 (N=6), 2.37e-7 (N=8).
  const Eigen::Vector3d V1{0.15, -0.1, 0.05};
  const double S1 = 1.2;
  double prev = std::numeric_limits<double>::infinity();
  for (int N : {4, 6, 8}) {
    VelocityBasis basis(N);
    const Eigen::VectorXd g =
        basis.project_maxwellian(1.2, Eigen::Vector3d{0.1, 0.0, -0.05}, 0.55);
    const Eigen::VectorXd h =
        kinetic::reframe_nodal(basis, g, Eigen::Vector3d::Zero(), 1.0, V1, S1);
    const MacroscopicState a = basis.moments(g);
    const MacroscopicState b =
        kinetic::physical_moments(basis.moments(h), V1, S1);
    double err = std::abs(a.rho - b.rho) / a.rho;
    err = std::max(err, (a.V - b.V).norm());
    err = std::max(err, std::abs(a.E - b.E) / a.E);
    err = std::max(err, (a.P - b.P).norm() / a.P.norm());
    err = std::max(err, (a.q - b.q).norm());
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-6);
}

}  // TEST_SUITE
