// Docking reference: the desired probe-to-drogue closure shrinks along a quintic
// (minimum-jerk) profile and reaches zero, with zero rate and acceleration, at contact.

#ifndef PROBEDOCK_REFERENCE_HPP
#define PROBEDOCK_REFERENCE_HPP

#include "probedock/controllers.hpp"
#include "probedock/drogue.hpp"
#include "probedock/kinematics.hpp"
#include "probedock/plant.hpp"

namespace probedock {

struct ClosureSchedule {
  /// Desired closure x_P* - x_D* at t = 0 (m, NED).
  Vec3 initial_closure{-5.0, 0.0, 0.0};
  /// Approach duration; the desired closure is zero from here on (s).
  double duration = 30.0;

  /// Probe trailing the drogue by `separation` metres along track.
  static ClosureSchedule along_track(double separation, double duration);

  double initial_separation() const { return initial_closure.norm(); }
  void validate() const;
};

/// Quintic blend s(tau) = 10 tau^3 - 15 tau^4 + 6 tau^5 and its first two time derivatives.
struct BlendSample {
  double s = 0.0;
  double s_dot = 0.0;
  double s_ddot = 0.0;
};
BlendSample min_jerk_blend(double t, double duration);

/// Desired closure and its derivatives at time t.
struct ClosureSample {
  Vec3 closure{Vec3::Zero()};
  Vec3 rate{Vec3::Zero()};
  Vec3 acceleration{Vec3::Zero()};
};
ClosureSample closure_at(double t, const ClosureSchedule& schedule);

/// Planner output at time t. The planned attitude is trim at zero yaw (straight tanker track),
/// so the CG reference is the probe reference minus R(trim) x_bar.
ReferenceSample reference_at(double t, const ClosureSchedule& schedule, const PlantParams& params,
                             const DrogueState& drogue_initial, const ProbeGeometry& geom);

}  // namespace probedock

#endif  // PROBEDOCK_REFERENCE_HPP
