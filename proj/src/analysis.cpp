#include "probedock/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace probedock {

Mat6 LyapunovParams::Q() const {
  Mat6 q;
  q << Q1, Q3.transpose(), Q3, Q4;
  return q;
}

SigmaBounds sigma_bounds(const Vec3& diagonal_gains) {
  return {diagonal_gains.minCoeff(), diagonal_gains.maxCoeff()};
}

SigmaBounds sigma_bounds(const Mat3& symmetric_gains) {
  const Eigen::JacobiSVD<Mat3> svd(symmetric_gains);
  const Vec3 s = svd.singularValues();
  return {s.minCoeff(), s.maxCoeff()};
}

double default_epsilon(const ControllerGains& gains) { return 0.01 * gains.kd.minCoeff(); }

LyapunovParams make_lyapunov_params(const ControllerGains& gains, double epsilon) {
  if (!(epsilon > 0.0)) throw IndefiniteLyapunovError("epsilon must be positive");
  if (!(gains.kd.minCoeff() > epsilon)) {
    throw IndefiniteLyapunovError("Kd - eps I is not positive definite; reduce epsilon");
  }
  LyapunovParams p;
  p.epsilon = epsilon;
  p.Q1 = gains.Kp() + epsilon * gains.Kd();
  p.Q3 = epsilon * Mat3::Identity();
  p.Q4 = Mat3::Identity();
  const Eigen::SelfAdjointEigenSolver<Mat6> eig(p.Q());
  if (eig.info() != Eigen::Success || !(eig.eigenvalues().minCoeff() > 0.0)) {
    throw IndefiniteLyapunovError("assembled Q is not positive definite");
  }
  return p;
}

LyapunovParams make_lyapunov_params(const ControllerGains& gains) {
  return make_lyapunov_params(gains, default_epsilon(gains));
}

double lyapunov_value(const ErrorState& E, const LyapunovParams& params) {
  return 0.5 * E.e.dot(params.Q1 * E.e) + 0.5 * E.e_dot.dot(params.Q4 * E.e_dot) + E.e.dot(params.Q3 * E.e_dot);
}

namespace {

InvariantSetBound level_from_sigmas(const SigmaBounds& kp, const SigmaBounds& kd, const UncertaintyBounds& bounds) {
  const double delta = bounds.delta_D + bounds.delta_R;
  InvariantSetBound b;
  b.level = 0.5 * delta * delta * (kp.max / (kp.min * kp.min) + 1.0 / (kd.min * kd.min));
  b.e_norm_ceiling = delta / kp.min;
  b.e_dot_norm_ceiling = delta / kd.min;
  return b;
}

}  // namespace

InvariantSetBound invariant_set_level(const ControllerGains& gains, const UncertaintyBounds& bounds) {
  return level_from_sigmas(sigma_bounds(gains.kp), sigma_bounds(gains.kd), bounds);
}

InvariantSetBound invariant_set_level(const Mat3& Kp, const Mat3& Kd, const UncertaintyBounds& bounds) {
  return level_from_sigmas(sigma_bounds(Kp), sigma_bounds(Kd), bounds);
}

ErrorState error_dynamics(const ErrorState& E, const ControllerGains& gains, const Vec3& drogue_dist,
                          const Vec3& probe_dist) {
  return {E.e_dot, -gains.kd.cwiseProduct(E.e_dot) - gains.kp.cwiseProduct(E.e) + drogue_dist + probe_dist};
}

namespace {

// Relative slack for bound checks so disturbances normalised exactly to the bound pass.
constexpr double kBoundSlack = 1e-12;

bool violates(const DisturbancePair& d, const UncertaintyBounds& bounds) {
  return d.drogue.norm() > bounds.delta_D * (1.0 + kBoundSlack) ||
         d.probe.norm() > bounds.delta_R * (1.0 + kBoundSlack);
}

}  // namespace

ErrorStepResult error_dynamics_step(const ErrorState& E, const ControllerGains& gains, const Vec3& drogue_dist,
                                    const Vec3& probe_dist, double dt, const UncertaintyBounds& bounds) {
  const DisturbancePair d{drogue_dist, probe_dist};
  return error_dynamics_step(
      E, gains, [&d](double) { return d; }, 0.0, dt, bounds);
}

ErrorStepResult error_dynamics_step(const ErrorState& E, const ControllerGains& gains, const DisturbanceFn& dist,
                                    double t, double dt, const UncertaintyBounds& bounds) {
  if (!(dt > 0.0)) throw std::invalid_argument("error_dynamics_step requires dt > 0");
  ErrorStepResult out;
  auto f = [&](double time, const Vec6& x) {
    const DisturbancePair d = dist(time);
    out.disturbance_violation = out.disturbance_violation || violates(d, bounds);
    return error_dynamics(ErrorState::from_stacked(x), gains, d.drogue, d.probe).stacked();
  };
  const Vec6 x = E.stacked();
  const Vec6 k1 = f(t, x);
  const Vec6 k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
  const Vec6 k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
  const Vec6 k4 = f(t + dt, x + dt * k3);
  out.next = ErrorState::from_stacked(x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  return out;
}

double vdot_check(const ErrorState& E, const ControllerGains& gains, const LyapunovParams& params,
                  const Vec3& drogue_dist, const Vec3& probe_dist) {
  const ErrorState rate = error_dynamics(E, gains, drogue_dist, probe_dist);
  // Q is symmetric, so d/dt (1/2 E^T Q E) = E^T Q E_dot.
  return E.stacked().dot(params.Q() * rate.stacked());
}

double vdot_upper_bound(const ErrorState& E, const ControllerGains& gains, const LyapunovParams& params,
                        const UncertaintyBounds& bounds) {
  const double eps = params.epsilon;
  const double delta = bounds.delta_D + bounds.delta_R;
  const double en = E.e.norm();
  const double edn = E.e_dot.norm();
  return -(gains.kd.minCoeff() - eps) * edn * edn - eps * gains.kp.minCoeff() * en * en + delta * edn +
         eps * delta * en;
}

BoundednessVerdict boundedness_verdict(const std::vector<TimedError>& trajectory, const InvariantSetBound& bound,
                                       const LyapunovParams& params) {
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    const double gap = trajectory[i].t - trajectory[i - 1].t;
    if (!(gap > 0.0) || gap > kMaxVerdictSpacing * (1.0 + 1e-9)) {
      throw std::invalid_argument("trajectory must be strictly increasing and sampled at >= 100 Hz");
    }
  }
  BoundednessVerdict v;
  v.e_norm_ceiling = bound.e_norm_ceiling;
  v.level = bound.level;
  for (const auto& sample : trajectory) {
    const bool inside = lyapunov_value(sample.E, params) <= bound.level;
    if (!v.entered) {
      if (!inside) continue;
      v.entered = true;
      v.entry_time = sample.t;
    }
    if (!inside) {
      if (v.exit_samples == 0) v.first_exit_time = sample.t;
      ++v.exit_samples;
    }
    const double en = sample.E.e.norm();
    v.max_e_norm_after_entry = std::max(v.max_e_norm_after_entry, en);
    if (en > bound.e_norm_ceiling) ++v.ceiling_violations;
  }
  return v;
}

namespace {

nlohmann::json number_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

void to_json(nlohmann::json& j, const BoundednessVerdict& v) {
  j = nlohmann::json{{"entered", v.entered},
                     {"entry_time", number_or_null(v.entry_time)},
                     {"exit_samples", v.exit_samples},
                     {"first_exit_time", number_or_null(v.first_exit_time)},
                     {"max_e_norm_after_entry", v.max_e_norm_after_entry},
                     {"ceiling_violations", v.ceiling_violations},
                     {"e_norm_ceiling", v.e_norm_ceiling},
                     {"level", v.level},
                     {"invariant", v.invariant()},
                     {"within_ceiling", v.within_ceiling()}};
}

void to_json(nlohmann::json& j, const InvariantSetBound& b) {
  j = nlohmann::json{
      {"level", b.level}, {"e_norm_ceiling", b.e_norm_ceiling}, {"e_dot_norm_ceiling", b.e_dot_norm_ceiling}};
}

}  // namespace probedock
