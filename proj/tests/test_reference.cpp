#include <gtest/gtest.h>

#include "probedock/reference.hpp"
#include "test_util.hpp"

using namespace probedock;

namespace {

const PlantParams kPlant{};

}  // namespace

TEST(MinJerkBlend, Endpoints) {
  const BlendSample a = min_jerk_blend(0.0, 30.0);
  EXPECT_EQ(a.s, 0.0);
  EXPECT_EQ(a.s_dot, 0.0);
  EXPECT_EQ(a.s_ddot, 0.0);
  const BlendSample b = min_jerk_blend(30.0, 30.0);
  EXPECT_EQ(b.s, 1.0);
  EXPECT_EQ(b.s_dot, 0.0);
  EXPECT_EQ(b.s_ddot, 0.0);
  EXPECT_NEAR(min_jerk_blend(15.0, 30.0).s, 0.5, 1e-15);
}

TEST(MinJerkBlend, DerivativesMatchFiniteDifferences) {
  const double T = 30.0, h = 1e-5;
  for (double t = 0.5; t < T; t += 0.5) {
    const double fd1 = (min_jerk_blend(t + h, T).s - min_jerk_blend(t - h, T).s) / (2 * h);
    const double fd2 = (min_jerk_blend(t + h, T).s_dot - min_jerk_blend(t - h, T).s_dot) / (2 * h);
    EXPECT_NEAR(fd1, min_jerk_blend(t, T).s_dot, 1e-8);
    EXPECT_NEAR(fd2, min_jerk_blend(t, T).s_ddot, 1e-8);
  }
}

TEST(MinJerkBlend, AccelerationContinuousAtBoundaries) {
  const double T = 30.0;
  EXPECT_NEAR(min_jerk_blend(1e-9, T).s_ddot, 0.0, 1e-9);
  EXPECT_NEAR(min_jerk_blend(T - 1e-9, T).s_ddot, 0.0, 1e-9);
}

TEST(Closure, StartsAtSeparationEndsAtZero) {
  const ClosureSchedule s = ClosureSchedule::along_track(5.0, 30.0);
  EXPECT_EQ(s.initial_separation(), 5.0);
  EXPECT_EQ(closure_at(0.0, s).closure, Vec3(-5.0, 0.0, 0.0));
  for (double t : {30.0, 31.0, 35.0}) {
    const ClosureSample c = closure_at(t, s);
    EXPECT_EQ(c.closure, Vec3::Zero());
    EXPECT_EQ(c.rate, Vec3::Zero());
    EXPECT_EQ(c.acceleration, Vec3::Zero());
  }
}

TEST(Closure, PeakAccelerationBelowSaturation) {
  const ClosureSchedule s = ClosureSchedule::along_track(5.0, 30.0);
  double peak = 0.0;
  for (double t = 0.0; t <= 30.0; t += 0.001) peak = std::max(peak, closure_at(t, s).acceleration.norm());
  // Quintic peak: 10 / sqrt(3) * L / T^2.
  EXPECT_NEAR(peak, 10.0 / std::sqrt(3.0) * 5.0 / 900.0, 1e-8);
  EXPECT_LT(peak, kPlant.accel_limit.minCoeff());
}

TEST(Reference, ContactConditionAtEndOfApproach) {
  const ClosureSchedule s = ClosureSchedule::along_track(5.0, 30.0);
  const ReferenceSample r = reference_at(30.0, s, kPlant, default_drogue_initial(kPlant), ProbeGeometry{});
  EXPECT_EQ(r.probe_position, r.drogue_position);
  EXPECT_EQ(r.probe_velocity, r.drogue_velocity);
}

TEST(Reference, InitialProbeTrailsDrogueBySeparation) {
  const ClosureSchedule s = ClosureSchedule::along_track(5.0, 30.0);
  const ReferenceSample r = reference_at(0.0, s, kPlant, default_drogue_initial(kPlant), ProbeGeometry{});
  EXPECT_NEAR((r.drogue_position - r.probe_position).norm(), 5.0, 1e-12);
  EXPECT_EQ(r.probe_position, Vec3(0.0, 0.0, -1000.0));
}

TEST(Reference, CgTrackOffsetByTrimLeverArm) {
  const ClosureSchedule s = ClosureSchedule::along_track(5.0, 30.0);
  const ProbeGeometry geom{Vec3(3.0, 0.0, 0.0)};
  const Vec3 lever = rotation_matrix(kPlant.trim()) * geom.x_bar;
  for (double t = 0.0; t < 35.0; t += 2.5) {
    const ReferenceSample r = reference_at(t, s, kPlant, default_drogue_initial(kPlant), geom);
    EXPECT_LT((r.probe_position - r.cg_position - lever).norm(), 1e-12);
    EXPECT_EQ(r.probe_velocity, r.cg_velocity);
    EXPECT_EQ(r.psi_dot, 0.0);
  }
}

TEST(Reference, DerivativesMatchFiniteDifferences) {
  ClosureSchedule s;
  s.initial_closure = Vec3(-5.2, 0.3, -0.1);
  const double h = 1e-4;
  const DrogueState init = default_drogue_initial(kPlant);
  for (double t = 0.25; t < 34.0; t += 0.75) {
    const ReferenceSample plus = reference_at(t + h, s, kPlant, init, ProbeGeometry{});
    const ReferenceSample minus = reference_at(t - h, s, kPlant, init, ProbeGeometry{});
    const ReferenceSample mid = reference_at(t, s, kPlant, init, ProbeGeometry{});
    // Difference the closure, not absolute positions, to keep cancellation error small.
    const Vec3 fd_rate = ((plus.probe_position - plus.drogue_position) -
                          (minus.probe_position - minus.drogue_position)) /
                         (2 * h);
    const Vec3 fd_acc = (plus.probe_velocity - minus.probe_velocity) / (2 * h);
    EXPECT_LT((fd_rate - (mid.probe_velocity - mid.drogue_velocity)).norm(), 1e-8);
    EXPECT_LT((fd_acc - mid.acceleration).norm(), 1e-8);
  }
}

TEST(Reference, RejectsNegativeTimeAndBadSchedule) {
  const ClosureSchedule s;
  EXPECT_THROW(reference_at(-1.0, s, kPlant, default_drogue_initial(kPlant), ProbeGeometry{}), std::invalid_argument);
  ClosureSchedule bad;
  bad.duration = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}
