// Surrogate helicopter plant: outer-loop zero dynamics driven by attitude, a direct
// vertical-acceleration channel, and an inner loop that is either ideal (attitude follows
// the command instantly) or a first-order attitude lag.

#ifndef PROBEDOCK_PLANT_HPP
#define PROBEDOCK_PLANT_HPP

#include <stdexcept>
#include <string>

#include "probedock/kinematics.hpp"
#include "probedock/state.hpp"

namespace probedock {

enum class InnerLoopMode { kIdeal, kFirstOrderLag };

std::string to_string(InnerLoopMode mode);
InnerLoopMode inner_loop_mode_from_string(const std::string& name);

struct PlantParams {
  double g = 9.81;
  double theta_trim = -0.035;
  double phi_trim = -0.02;
  double tanker_speed = 56.58;
  double inner_loop_tau = 0.3;
  InnerLoopMode inner_loop_mode = InnerLoopMode::kFirstOrderLag;
  /// Per-axis magnitude limit on commanded NED accelerations (m/s^2).
  Vec3 accel_limit{5.0, 5.0, 5.0};

  Attitude<double> trim(double psi = 0.0) const { return {phi_trim, theta_trim, psi}; }
  void validate() const;
};

/// Commanded NED accelerations plus commanded yaw rate.
struct AccelCommand {
  Vec3 accel{Vec3::Zero()};
  double psi_dot = 0.0;
};

class TimeStepError : public std::invalid_argument {
 public:
  explicit TimeStepError(const std::string& what) : std::invalid_argument(what) {}
};

inline constexpr double kMaxTimeStep = 0.05;

/// Horizontal (North, East) accelerations produced by holding attitude `att`.
Eigen::Vector2d zero_dynamics_accel(const Attitude<double>& att, const PlantParams& params);

/// Clamp each axis of the command to the plant's acceleration limit.
AccelCommand saturate(const AccelCommand& cmd, const PlantParams& params);

/// Advance the plant by `dt` with an RK4 step. Commands are held constant over the step.
HelicopterState step(const HelicopterState& state, const AccelCommand& cmd, const Attitude<double>& att_cmd,
                     double dt, const PlantParams& params);

}  // namespace probedock

#endif  // PROBEDOCK_PLANT_HPP
