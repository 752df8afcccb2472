// Lyapunov analysis of the closed-loop docking error
//   e_ddot = -Kd e_dot - Kp e + d_drogue + d_probe
// with V(E) = 1/2 E^T Q E, Q = [[Kp + eps Kd, eps I], [eps I, I]], and the ultimate-bound
// set Lambda = { E : V(E) <= level } with
//   level = (dD + dR)^2 / 2 * (sigma_max(Kp) / sigma_min(Kp)^2 + 1 / sigma_min(Kd)^2).

#ifndef PROBEDOCK_ANALYSIS_HPP
#define PROBEDOCK_ANALYSIS_HPP

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "probedock/controllers.hpp"
#include "probedock/drogue.hpp"
#include "probedock/kinematics.hpp"

namespace probedock {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

struct ErrorState {
  Vec3 e{Vec3::Zero()};      // closure error (m)
  Vec3 e_dot{Vec3::Zero()};  // closure error rate (m/s)

  Vec6 stacked() const {
    Vec6 v;
    v << e, e_dot;
    return v;
  }
  static ErrorState from_stacked(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }
};

class IndefiniteLyapunovError : public std::domain_error {
 public:
  explicit IndefiniteLyapunovError(const std::string& what) : std::domain_error(what) {}
};

struct LyapunovParams {
  double epsilon = 0.0;
  Mat3 Q1{Mat3::Identity()};
  Mat3 Q3{Mat3::Zero()};
  Mat3 Q4{Mat3::Identity()};

  Mat6 Q() const;
};

/// Extreme singular values of a symmetric positive-definite gain matrix.
struct SigmaBounds {
  double min = 0.0;
  double max = 0.0;
};
SigmaBounds sigma_bounds(const Vec3& diagonal_gains);
SigmaBounds sigma_bounds(const Mat3& symmetric_gains);

/// Default epsilon: 1% of the smallest derivative gain.
double default_epsilon(const ControllerGains& gains);

/// Builds Q1 = Kp + eps Kd, Q3 = eps I, Q4 = I and checks Q is positive definite.
LyapunovParams make_lyapunov_params(const ControllerGains& gains, double epsilon);
LyapunovParams make_lyapunov_params(const ControllerGains& gains);

double lyapunov_value(const ErrorState& E, const LyapunovParams& params);

struct InvariantSetBound {
  double level = 0.0;
  double e_norm_ceiling = 0.0;
  double e_dot_norm_ceiling = 0.0;
};

InvariantSetBound invariant_set_level(const ControllerGains& gains, const UncertaintyBounds& bounds);
InvariantSetBound invariant_set_level(const Mat3& Kp, const Mat3& Kd, const UncertaintyBounds& bounds);

/// Right-hand side of the error dynamics: returns (e_dot, e_ddot).
ErrorState error_dynamics(const ErrorState& E, const ControllerGains& gains, const Vec3& drogue_dist,
                          const Vec3& probe_dist);

struct ErrorStepResult {
  ErrorState next;
  /// Set when a supplied disturbance exceeded its bound (small relative slack allowed).
  bool disturbance_violation = false;
};

/// RK4 step with the two disturbances held constant over the step.
ErrorStepResult error_dynamics_step(const ErrorState& E, const ControllerGains& gains, const Vec3& drogue_dist,
                                    const Vec3& probe_dist, double dt, const UncertaintyBounds& bounds);

struct DisturbancePair {
  Vec3 drogue{Vec3::Zero()};
  Vec3 probe{Vec3::Zero()};
};
using DisturbanceFn = std::function<DisturbancePair(double)>;

/// RK4 step from time t with time-varying disturbances.
ErrorStepResult error_dynamics_step(const ErrorState& E, const ControllerGains& gains, const DisturbanceFn& dist,
                                    double t, double dt, const UncertaintyBounds& bounds);

/// Analytic dV/dt along the error dynamics.
double vdot_check(const ErrorState& E, const ControllerGains& gains, const LyapunovParams& params,
                  const Vec3& drogue_dist, const Vec3& probe_dist);

/// Norm-based upper bound on dV/dt given only the disturbance bounds.
double vdot_upper_bound(const ErrorState& E, const ControllerGains& gains, const LyapunovParams& params,
                        const UncertaintyBounds& bounds);

struct TimedError {
  double t = 0.0;
  ErrorState E;
};

struct BoundednessVerdict {
  bool entered = false;
  double entry_time = std::numeric_limits<double>::quiet_NaN();
  /// Samples after entry that fall outside Lambda.
  std::size_t exit_samples = 0;
  double first_exit_time = std::numeric_limits<double>::quiet_NaN();
  double max_e_norm_after_entry = 0.0;
  /// Samples after entry with ||e|| above the e-norm ceiling.
  std::size_t ceiling_violations = 0;
  double e_norm_ceiling = 0.0;
  double level = 0.0;

  bool invariant() const { return entered && exit_samples == 0; }
  bool within_ceiling() const { return entered && ceiling_violations == 0; }
};

inline constexpr double kMaxVerdictSpacing = 0.01;

/// Checks entry into and invariance of Lambda along a sampled trajectory (>= 100 Hz).
BoundednessVerdict boundedness_verdict(const std::vector<TimedError>& trajectory, const InvariantSetBound& bound,
                                       const LyapunovParams& params);

void to_json(nlohmann::json& j, const BoundednessVerdict& v);
void to_json(nlohmann::json& j, const InvariantSetBound& b);

}  // namespace probedock

#endif  // PROBEDOCK_ANALYSIS_HPP
