#include "probedock/controllers.hpp"

#include <cmath>

namespace probedock {

std::string to_string(ControllerKind kind) { return kind == ControllerKind::kStandard ? "standard" : "proposed"; }

ControllerKind controller_kind_from_string(const std::string& name) {
  if (name == "standard") return ControllerKind::kStandard;
  if (name == "proposed") return ControllerKind::kProposed;
  throw std::invalid_argument("unknown controller '" + name + "' (expected standard|proposed)");
}

void ControllerGains::validate() const {
  if (!(kp.array() > 0.0).all()) throw std::invalid_argument("gains.Kp entries must be positive");
  if (!(kd.array() > 0.0).all()) throw std::invalid_argument("gains.Kd entries must be positive");
}

namespace {

AccelCommand pd_law(const Vec3& tracked_position, const Vec3& tracked_velocity, const Vec3& ref_position,
                    const Vec3& ref_velocity, const DrogueState& drogue, const ReferenceSample& ref,
                    const ControllerGains& gains) {
  const Vec3 closure_error = (ref_position - ref.drogue_position) - (tracked_position - drogue.position);
  const Vec3 rate_error = (ref_velocity - ref.drogue_velocity) - (tracked_velocity - drogue.velocity);
  AccelCommand cmd;
  cmd.accel = ref.acceleration + gains.kd.cwiseProduct(rate_error) + gains.kp.cwiseProduct(closure_error);
  cmd.psi_dot = yaw_command(ref);
  return cmd;
}

}  // namespace

AccelCommand standard_command(const HelicopterState& state, const DrogueState& drogue, const ReferenceSample& ref,
                              const ControllerGains& gains) {
  return pd_law(state.position, state.velocity, ref.cg_position, ref.cg_velocity, drogue, ref, gains);
}

AccelCommand proposed_command(const HelicopterState& state, const ProbeGeometry& geom, const DrogueState& drogue,
                              const ReferenceSample& ref, const ControllerGains& gains) {
  return pd_law(probe_position(state, geom), probe_velocity(state, geom), ref.probe_position, ref.probe_velocity,
                drogue, ref, gains);
}

AccelCommand command(ControllerKind kind, const HelicopterState& state, const ProbeGeometry& geom,
                     const DrogueState& drogue, const ReferenceSample& ref, const ControllerGains& gains) {
  return kind == ControllerKind::kStandard ? standard_command(state, drogue, ref, gains)
                                           : proposed_command(state, geom, drogue, ref, gains);
}

Attitude<double> invert_to_attitude(const AccelCommand& cmd, double psi_c, const PlantParams& params) {
  const double c = std::cos(psi_c);
  const double s = std::sin(psi_c);
  // Rotate the command into the heading frame: forward and right components.
  const double forward = cmd.accel(0) * c + cmd.accel(1) * s;
  const double right = -cmd.accel(0) * s + cmd.accel(1) * c;
  const double g = params.g;

  Attitude<double> att;
  att.theta = -std::atan(forward / g) + params.theta_trim;
  // tan(phi - phi_trim) = right * cos(theta - theta_trim) / g
  att.phi = std::atan(right / std::sqrt(g * g + forward * forward)) + params.phi_trim;
  att.psi = psi_c;

  if (!std::isfinite(att.phi) || !std::isfinite(att.theta) || std::abs(att.theta) >= kPitchSingularityGuard ||
      std::abs(att.theta - params.theta_trim) >= kPitchSingularityGuard) {
    throw InfeasibleCommandError("no attitude inside the singularity guard achieves the commanded acceleration");
  }
  return att;
}

}  // namespace probedock
