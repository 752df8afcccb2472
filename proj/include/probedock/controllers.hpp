// Outer-loop position controllers and the dynamic-inversion attitude command.
//
// Both laws share one PD structure on the closure between a tracked point and the drogue:
//   accel_c = accel_ref + Kd (closure_rate_ref - closure_rate) + Kp (closure_ref - closure)
// The standard law tracks the CG; the probe-feedback law tracks the probe tip.

#ifndef PROBEDOCK_CONTROLLERS_HPP
#define PROBEDOCK_CONTROLLERS_HPP

#include <stdexcept>
#include <string>

#include "probedock/drogue.hpp"
#include "probedock/kinematics.hpp"
#include "probedock/plant.hpp"
#include "probedock/state.hpp"

namespace probedock {

enum class ControllerKind { kStandard, kProposed };

std::string to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& name);

struct ControllerGains {
  Vec3 kp{0.41, 0.37, 35.0};  // 1/s^2
  Vec3 kd{0.75, 0.75, 8.8};   // 1/s

  Mat3 Kp() const { return kp.asDiagonal(); }
  Mat3 Kd() const { return kd.asDiagonal(); }
  void validate() const;
};

/// Planner output at one instant. The CG track is the probe track shifted by the lever arm
/// at the planned attitude; the standard law consumes it.
struct ReferenceSample {
  Vec3 probe_position{Vec3::Zero()};
  Vec3 probe_velocity{Vec3::Zero()};
  Vec3 cg_position{Vec3::Zero()};
  Vec3 cg_velocity{Vec3::Zero()};
  /// Desired CG acceleration (feed-forward term).
  Vec3 acceleration{Vec3::Zero()};
  Vec3 drogue_position{Vec3::Zero()};
  Vec3 drogue_velocity{Vec3::Zero()};
  double psi_dot = 0.0;
};

class InfeasibleCommandError : public std::domain_error {
 public:
  explicit InfeasibleCommandError(const std::string& what) : std::domain_error(what) {}
};

/// CG-feedback law.
AccelCommand standard_command(const HelicopterState& state, const DrogueState& drogue, const ReferenceSample& ref,
                              const ControllerGains& gains);

/// Probe-feedback law: the standard law with probe tip position and velocity in place of the CG.
AccelCommand proposed_command(const HelicopterState& state, const ProbeGeometry& geom, const DrogueState& drogue,
                              const ReferenceSample& ref, const ControllerGains& gains);

AccelCommand command(ControllerKind kind, const HelicopterState& state, const ProbeGeometry& geom,
                     const DrogueState& drogue, const ReferenceSample& ref, const ControllerGains& gains);

/// Attitude (trim included) whose zero dynamics reproduce the commanded horizontal
/// accelerations at yaw `psi_c`.
Attitude<double> invert_to_attitude(const AccelCommand& cmd, double psi_c, const PlantParams& params);

inline double yaw_command(const ReferenceSample& ref) { return ref.psi_dot; }

}  // namespace probedock

#endif  // PROBEDOCK_CONTROLLERS_HPP
