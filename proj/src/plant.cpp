#include "probedock/plant.hpp"

#include <algorithm>
#include <cmath>

namespace probedock {

std::string to_string(InnerLoopMode mode) {
  return mode == InnerLoopMode::kIdeal ? "ideal" : "first-order-lag";
}

InnerLoopMode inner_loop_mode_from_string(const std::string& name) {
  if (name == "ideal") return InnerLoopMode::kIdeal;
  if (name == "first-order-lag" || name == "lag") return InnerLoopMode::kFirstOrderLag;
  throw std::invalid_argument("unknown inner-loop mode '" + name + "'");
}

void PlantParams::validate() const {
  if (!(g > 0.0)) throw std::invalid_argument("plant.g must be positive");
  if (!(tanker_speed > 0.0)) throw std::invalid_argument("plant.tanker_speed must be positive");
  if (inner_loop_mode == InnerLoopMode::kFirstOrderLag && !(inner_loop_tau > 0.0)) {
    throw std::invalid_argument("plant.inner_loop_tau must be positive in lag mode");
  }
  if (!(accel_limit.array() > 0.0).all()) throw std::invalid_argument("plant.accel_limit must be positive");
}

Eigen::Vector2d zero_dynamics_accel(const Attitude<double>& att, const PlantParams& params) {
  const double dtheta = att.theta - params.theta_trim;
  const double dphi = att.phi - params.phi_trim;
  if (!std::isfinite(dtheta) || !std::isfinite(dphi) || std::abs(dtheta) >= kPitchSingularityGuard) {
    throw SingularAttitudeError("pitch offset from trim is singular in the zero dynamics");
  }
  const double tan_pitch = std::tan(dtheta);
  const double roll_term = std::tan(dphi) / std::cos(dtheta);
  const double c = std::cos(att.psi);
  const double s = std::sin(att.psi);
  return {-params.g * (tan_pitch * c + roll_term * s), -params.g * (tan_pitch * s - roll_term * c)};
}

AccelCommand saturate(const AccelCommand& cmd, const PlantParams& params) {
  AccelCommand out = cmd;
  out.accel = cmd.accel.cwiseMax(-params.accel_limit).cwiseMin(params.accel_limit);
  return out;
}

namespace {

using PlantVector = Eigen::Matrix<double, 9, 1>;

PlantVector pack(const HelicopterState& s) {
  PlantVector x;
  x << s.position, s.velocity, s.attitude.phi, s.attitude.theta, s.attitude.psi;
  return x;
}

PlantVector derivative(const PlantVector& x, const AccelCommand& cmd, const Attitude<double>& att_cmd,
                       const PlantParams& params) {
  const Attitude<double> att{x(6), x(7), x(8)};
  const Eigen::Vector2d horizontal = zero_dynamics_accel(att, params);
  PlantVector dx;
  dx.segment<3>(0) = x.segment<3>(3);
  dx(3) = horizontal(0);
  dx(4) = horizontal(1);
  dx(5) = cmd.accel(2);
  if (params.inner_loop_mode == InnerLoopMode::kFirstOrderLag) {
    dx(6) = (att_cmd.phi - att.phi) / params.inner_loop_tau;
    dx(7) = (att_cmd.theta - att.theta) / params.inner_loop_tau;
  } else {
    dx(6) = 0.0;
    dx(7) = 0.0;
  }
  dx(8) = cmd.psi_dot;
  return dx;
}

}  // namespace

HelicopterState step(const HelicopterState& state, const AccelCommand& cmd, const Attitude<double>& att_cmd,
                     double dt, const PlantParams& params) {
  if (!(dt > 0.0) || dt > kMaxTimeStep) {
    throw TimeStepError("time step " + std::to_string(dt) + " s outside (0, 0.05]");
  }
  PlantVector x = pack(state);
  if (params.inner_loop_mode == InnerLoopMode::kIdeal) {
    x(6) = att_cmd.phi;
    x(7) = att_cmd.theta;
  }
  const PlantVector k1 = derivative(x, cmd, att_cmd, params);
  const PlantVector k2 = derivative(x + 0.5 * dt * k1, cmd, att_cmd, params);
  const PlantVector k3 = derivative(x + 0.5 * dt * k2, cmd, att_cmd, params);
  const PlantVector k4 = derivative(x + dt * k3, cmd, att_cmd, params);
  const PlantVector next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

  HelicopterState out;
  out.position = next.segment<3>(0);
  out.velocity = next.segment<3>(3);
  out.attitude = {next(6), next(7), next(8)};
  check_attitude(out.attitude);
  const PlantVector rate = derivative(next, cmd, att_cmd, params);
  out.rates = {rate(6), rate(7), rate(8)};
  return out;
}

}  // namespace probedock
