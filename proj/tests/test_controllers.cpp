#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "probedock/controllers.hpp"
#include "probedock/reference.hpp"
#include "probedock/state.hpp"

using namespace probedock;

namespace {

struct Scenario {
  HelicopterState state;
  DrogueState drogue;
  ReferenceSample ref;
};

// Errors exactly zero at the CG: reference closure equals actual closure.
Scenario zero_error_at_cg() {
  Scenario s;
  s.state.position = Vec3(1.0, 0.5, -1000.2);
  s.state.velocity = Vec3(56.6, 0.1, -0.05);
  s.drogue.position = Vec3(6.0, 0.2, -1000.0);
  s.drogue.velocity = Vec3(56.5, 0.0, 0.02);
  s.ref.drogue_position = Vec3(5.5, 0.0, -1000.0);
  s.ref.drogue_velocity = Vec3(56.58, 0.0, 0.0);
  s.ref.cg_position = s.ref.drogue_position + (s.state.position - s.drogue.position);
  s.ref.cg_velocity = s.ref.drogue_velocity + (s.state.velocity - s.drogue.velocity);
  s.ref.probe_position = s.ref.cg_position;
  s.ref.probe_velocity = s.ref.cg_velocity;
  s.ref.acceleration = Vec3(0.3, -0.1, 0.05);
  return s;
}

Scenario random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Scenario s;
  s.state.position = Vec3(u(rng), u(rng), -1000.0 + u(rng));
  s.state.velocity = Vec3(56.58 + u(rng), u(rng), u(rng));
  s.state.attitude = {0.3 * u(rng), 0.3 * u(rng), 3.0 * u(rng)};
  s.state.rates = {0.2 * u(rng), 0.2 * u(rng), 0.2 * u(rng)};
  s.drogue.position = Vec3(5.0 + u(rng), u(rng), -1000.0 + u(rng));
  s.drogue.velocity = Vec3(56.58 + 0.1 * u(rng), 0.1 * u(rng), 0.1 * u(rng));
  s.ref.drogue_position = Vec3(5.0, 0.0, -1000.0);
  s.ref.drogue_velocity = Vec3(56.58, 0.0, 0.0);
  s.ref.probe_position = Vec3(2.0 * u(rng), u(rng), -1000.0 + u(rng));
  s.ref.probe_velocity = Vec3(56.58 + u(rng), u(rng), u(rng));
  s.ref.cg_position = s.ref.probe_position;
  s.ref.cg_velocity = s.ref.probe_velocity;
  s.ref.acceleration = Vec3(u(rng), u(rng), u(rng));
  return s;
}

}  // namespace

TEST(StandardCommand, ZeroErrorPassesDesiredAcceleration) {
  const Scenario s = zero_error_at_cg();
  const AccelCommand c = standard_command(s.state, s.drogue, s.ref, ControllerGains{});
  EXPECT_LT((c.accel - s.ref.acceleration).norm(), 1e-12);
}

TEST(StandardCommand, PositionErrorBeyondReference) {
  Scenario s = zero_error_at_cg();
  s.ref.acceleration = Vec3::Zero();
  s.state.position += Vec3(1.0, 0.0, 0.0);
  const ControllerGains g;
  const AccelCommand c = standard_command(s.state, s.drogue, s.ref, g);
  EXPECT_LT((c.accel - Vec3(-g.kp(0), 0.0, 0.0)).norm(), 1e-12);
}

TEST(StandardCommand, CorrectionLinearInGains) {
  std::mt19937_64 rng(1);
  const Scenario s = random_scenario(rng);
  ControllerGains g;
  const Vec3 base = standard_command(s.state, s.drogue, s.ref, g).accel - s.ref.acceleration;
  g.kp *= 2.0;
  g.kd *= 2.0;
  const Vec3 doubled = standard_command(s.state, s.drogue, s.ref, g).accel - s.ref.acceleration;
  EXPECT_LT((doubled - 2.0 * base).norm(), 1e-12 * base.norm());
}

TEST(StandardCommand, ForwardsYawRate) {
  Scenario s = zero_error_at_cg();
  s.ref.psi_dot = 0.02;
  EXPECT_EQ(standard_command(s.state, s.drogue, s.ref, ControllerGains{}).psi_dot, 0.02);
  EXPECT_EQ(yaw_command(s.ref), 0.02);
  s.ref.psi_dot = 0.0;
  EXPECT_EQ(yaw_command(s.ref), 0.0);
  s.ref.psi_dot = -1.7e3;
  EXPECT_EQ(yaw_command(s.ref), -1.7e3);
}

TEST(ProposedCommand, ZeroProbeErrorPassesDesiredAcceleration) {
  Scenario s = zero_error_at_cg();
  const ProbeGeometry geom{Vec3(3.0, 0.2, 0.4)};
  s.state.attitude = {0.05, -0.03, 0.4};
  s.state.rates = {0.01, -0.02, 0.03};
  s.ref.probe_position = s.ref.drogue_position + (probe_position(s.state, geom) - s.drogue.position);
  s.ref.probe_velocity = s.ref.drogue_velocity + (probe_velocity(s.state, geom) - s.drogue.velocity);
  const AccelCommand c = proposed_command(s.state, geom, s.drogue, s.ref, ControllerGains{});
  EXPECT_LT((c.accel - s.ref.acceleration).norm(), 1e-12);
}

TEST(ProposedCommand, DegeneratesToStandardWithoutLeverArm) {
  std::mt19937_64 rng(2);
  ControllerGains g;
  const ProbeGeometry geom{Vec3::Zero()};
  for (int i = 0; i < 1000; ++i) {
    const Scenario s = random_scenario(rng);
    const AccelCommand a = standard_command(s.state, s.drogue, s.ref, g);
    const AccelCommand b = proposed_command(s.state, geom, s.drogue, s.ref, g);
    EXPECT_EQ(a.accel, b.accel);
    EXPECT_EQ(a.psi_dot, b.psi_dot);
    EXPECT_EQ(command(ControllerKind::kStandard, s.state, geom, s.drogue, s.ref, g).accel,
              command(ControllerKind::kProposed, s.state, geom, s.drogue, s.ref, g).accel);
  }
}

TEST(ProposedCommand, PlannerReferencesDegenerateToo) {
  const PlantParams p;
  const ProbeGeometry geom{Vec3::Zero()};
  const ClosureSchedule sched = ClosureSchedule::along_track(5.0, 30.0);
  std::mt19937_64 rng(6);
  for (double t = 0.0; t <= 35.0; t += 1.25) {
    const ReferenceSample ref = reference_at(t, sched, p, default_drogue_initial(p), geom);
    Scenario s = random_scenario(rng);
    s.ref = ref;
    EXPECT_EQ(standard_command(s.state, s.drogue, ref, ControllerGains{}).accel,
              proposed_command(s.state, geom, s.drogue, ref, ControllerGains{}).accel);
  }
}

TEST(ProposedCommand, ClosedFormDifferenceAtLevelAttitude) {
  std::mt19937_64 rng(3);
  const ControllerGains g;
  const ProbeGeometry geom{Vec3(3.0, 0.0, 0.0)};
  for (int i = 0; i < 100; ++i) {
    Scenario s = random_scenario(rng);
    s.state.attitude = {};
    s.state.rates = {};
    const Vec3 diff = proposed_command(s.state, geom, s.drogue, s.ref, g).accel -
                      standard_command(s.state, s.drogue, s.ref, g).accel;
    // Probe sits R x_bar ahead of the CG; with no rotation rate the velocity terms agree.
    const Vec3 expected = -g.kp.cwiseProduct(rotation_matrix(s.state.attitude) * geom.x_bar);
    EXPECT_LT((diff - expected).norm(), 1e-12);
  }
}

TEST(ProposedCommand, LipschitzInStateInputs) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const ControllerGains g;
  const ProbeGeometry geom{Vec3(3.0, 0.5, -0.4)};
  const double kp_max = g.kp.maxCoeff();
  const double kd_max = g.kd.maxCoeff();
  const double lever = geom.x_bar.norm();
  for (int i = 0; i < 2000; ++i) {
    const Scenario a = random_scenario(rng);
    Scenario b = a;
    const double scale = std::pow(10.0, -4.0 * (u(rng) + 1.0));
    b.state.position += scale * Vec3(u(rng), u(rng), u(rng));
    b.state.velocity += scale * Vec3(u(rng), u(rng), u(rng));
    b.state.attitude.phi += scale * u(rng);
    b.state.attitude.theta += scale * u(rng);
    b.state.attitude.psi += scale * u(rng);
    b.state.rates.phi_dot += scale * u(rng);
    b.state.rates.theta_dot += scale * u(rng);
    b.state.rates.psi_dot += scale * u(rng);

    const double dx = (a.state.position - b.state.position).norm();
    const double dv = (a.state.velocity - b.state.velocity).norm();
    const double da = std::abs(a.state.attitude.phi - b.state.attitude.phi) +
                      std::abs(a.state.attitude.theta - b.state.attitude.theta) +
                      std::abs(a.state.attitude.psi - b.state.attitude.psi);
    const double dr = std::abs(a.state.rates.phi_dot - b.state.rates.phi_dot) +
                      std::abs(a.state.rates.theta_dot - b.state.rates.theta_dot) +
                      std::abs(a.state.rates.psi_dot - b.state.rates.psi_dot);
    const double rate_sum = std::abs(b.state.rates.phi_dot) + std::abs(b.state.rates.theta_dot) +
                            std::abs(b.state.rates.psi_dot);

    const double standard_bound = kp_max * dx + kd_max * dv;
    const double d_std = (standard_command(a.state, a.drogue, a.ref, g).accel -
                          standard_command(b.state, b.drogue, b.ref, g).accel)
                             .norm();
    EXPECT_LE(d_std, standard_bound * (1.0 + 1e-9) + 1e-15);

    const double proposed_bound = kp_max * (dx + lever * da) + kd_max * (dv + lever * (dr + rate_sum * da));
    const double d_prop = (proposed_command(a.state, geom, a.drogue, a.ref, g).accel -
                           proposed_command(b.state, geom, b.drogue, b.ref, g).accel)
                              .norm();
    EXPECT_LE(d_prop, proposed_bound * (1.0 + 1e-9) + 1e-15);
  }
}

TEST(Inversion, ZeroCommandGivesTrim) {
  const PlantParams p;
  for (double psi : {0.0, 1.0, -2.5}) {
    AccelCommand c;
    c.accel = Vec3(0.0, 0.0, 3.0);
    const Attitude<double> att = invert_to_attitude(c, psi, p);
    EXPECT_EQ(att.phi, p.phi_trim);
    EXPECT_EQ(att.theta, p.theta_trim);
    EXPECT_EQ(att.psi, psi);
  }
}

TEST(Inversion, RoundTripRecoversCommand) {
  const PlantParams p;
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(-5.0, 5.0), yaw(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 10000; ++i) {
    AccelCommand c;
    c.accel = Vec3(u(rng), u(rng), u(rng));
    const double psi = yaw(rng);
    const Eigen::Vector2d back = zero_dynamics_accel(invert_to_attitude(c, psi, p), p);
    EXPECT_LT((back - c.accel.head<2>()).norm(), 1e-9);
  }
}

TEST(Inversion, AnalyticPitchCaseWithoutTrim) {
  PlantParams p;
  p.theta_trim = 0.0;
  p.phi_trim = 0.0;
  AccelCommand c;
  c.accel = Vec3(-p.g * std::tan(0.1), 0.0, 0.0);
  const Attitude<double> att = invert_to_attitude(c, 0.0, p);
  EXPECT_NEAR(att.theta, 0.1, 1e-15);
  EXPECT_NEAR(att.phi, 0.0, 1e-15);
}

TEST(Inversion, InfeasibleCommandThrows) {
  const PlantParams p;
  AccelCommand c;
  c.accel = Vec3(1e6, 0.0, 0.0);
  EXPECT_THROW(invert_to_attitude(c, 0.0, p), InfeasibleCommandError);
  c.accel = Vec3(NAN, 0.0, 0.0);
  EXPECT_THROW(invert_to_attitude(c, 0.0, p), InfeasibleCommandError);
}

TEST(ControllerKindNames, RoundTrip) {
  EXPECT_EQ(controller_kind_from_string("standard"), ControllerKind::kStandard);
  EXPECT_EQ(controller_kind_from_string(to_string(ControllerKind::kProposed)), ControllerKind::kProposed);
  EXPECT_THROW(controller_kind_from_string("pid"), std::invalid_argument);
}

TEST(Gains, ValidateRejectsNonPositive) {
  ControllerGains g;
  EXPECT_NO_THROW(g.validate());
  g.kp(1) = 0.0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
}
