#ifndef PROBEDOCK_STATE_HPP
#define PROBEDOCK_STATE_HPP

#include <cmath>

#include "probedock/kinematics.hpp"

namespace probedock {

/// Rigid-body state of the receiver helicopter. Position and velocity are the CG in NED.
struct HelicopterState {
  Vec3 position{Vec3::Zero()};
  Vec3 velocity{Vec3::Zero()};
  Attitude<double> attitude{};
  AngularRates<double> rates{};

  bool finite() const {
    return position.allFinite() && velocity.allFinite() && std::isfinite(attitude.phi) &&
           std::isfinite(attitude.theta) && std::isfinite(attitude.psi) && std::isfinite(rates.phi_dot) &&
           std::isfinite(rates.theta_dot) && std::isfinite(rates.psi_dot);
  }
};

/// Probe tip in NED: x_P = x_CG + R(att) x_bar.
inline Vec3 probe_position(const HelicopterState& state, const ProbeGeometry& geom) {
  return state.position + rotation_matrix(state.attitude) * geom.x_bar;
}

/// Probe tip velocity in NED: CG velocity plus dR/dt x_bar.
inline Vec3 probe_velocity(const HelicopterState& state, const ProbeGeometry& geom) {
  return state.velocity + rotation_matrix_dot(state.attitude, state.rates) * geom.x_bar;
}

}  // namespace probedock

#endif  // PROBEDOCK_STATE_HPP
