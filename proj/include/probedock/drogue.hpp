// Drogue motion: the planner's straight-line tanker-speed track plus a smooth, seeded,
// wind-driven perturbation whose acceleration is bounded by delta_D by construction.

#ifndef PROBEDOCK_DROGUE_HPP
#define PROBEDOCK_DROGUE_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "probedock/kinematics.hpp"
#include "probedock/plant.hpp"

namespace probedock {

inline constexpr double kKnotToMetersPerSecond = 1852.0 / 3600.0;

struct DrogueState {
  Vec3 position{Vec3::Zero()};
  Vec3 velocity{Vec3::Zero()};
  Vec3 acceleration{Vec3::Zero()};
};

/// Horizontal crosswind. A negative magnitude reverses the direction.
struct WindCondition {
  double magnitude_kt = 0.0;
  double direction_rad = 0.0;
};

struct UncertaintyBounds {
  double delta_D = 0.18;  // drogue acceleration uncertainty (m/s^2)
  double delta_R = 0.51;  // probe acceleration uncertainty (m/s^2)
};

struct PerturbationParams {
  int components_per_axis = 3;
  double min_frequency_hz = 0.1;
  double max_frequency_hz = 0.8;
  /// Wind magnitude at which the acceleration bound is reached.
  double full_scale_wind_kt = 5.0;
  /// Share of raw amplitude weight given to the vertical axis, in [0, 1).
  double vertical_fraction = 0.3;
};

/// One sinusoidal acceleration component a*sin(omega*t + phase).
struct SwayComponent {
  double amplitude = 0.0;  // m/s^2
  double omega = 0.0;      // rad/s
  double phase = 0.0;      // rad
};

/// Seeded perturbation about the nominal drogue track. Horizontal sway acts along the
/// wind direction, vertical sway along NED down.
class DroguePerturbation {
 public:
  DroguePerturbation() = default;
  DroguePerturbation(const WindCondition& wind, const UncertaintyBounds& bounds, std::uint64_t seed,
                     const PerturbationParams& params = {});

  /// Offset (position, velocity, acceleration) from the nominal track at time t.
  DrogueState offset(double t) const;

  /// Upper bound on the acceleration offset norm over all t (attained asymptotically).
  double acceleration_bound() const;

  const Vec3& horizontal_axis() const { return horizontal_axis_; }
  const std::vector<SwayComponent>& horizontal() const { return horizontal_; }
  const std::vector<SwayComponent>& vertical() const { return vertical_; }

 private:
  Vec3 horizontal_axis_{Vec3::UnitX()};
  std::vector<SwayComponent> horizontal_;
  std::vector<SwayComponent> vertical_;
};

/// Planner drogue track: constant tanker-speed flight along North from `initial`.
DrogueState nominal_trajectory(double t, const PlantParams& params, const DrogueState& initial);

DrogueState perturbed_trajectory(double t, const PlantParams& params, const DrogueState& initial,
                                 const DroguePerturbation& perturbation);

DrogueState perturbed_trajectory(double t, const WindCondition& wind, const UncertaintyBounds& bounds,
                                 std::uint64_t seed, const PlantParams& params, const DrogueState& initial,
                                 const PerturbationParams& perturbation_params = {});

/// Default drogue start: (5, 0, -1000) m moving North at tanker speed.
DrogueState default_drogue_initial(const PlantParams& params);

struct DrogueSample {
  double t = 0.0;
  DrogueState state;
};

/// CSV with header t,X_D,Y_D,Z_D,u_D,v_D,w_D.
void write_drogue_csv(std::ostream& os, const std::vector<DrogueSample>& samples);

}  // namespace probedock

#endif  // PROBEDOCK_DROGUE_HPP
