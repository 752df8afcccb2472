#include "probedock/reference.hpp"

#include <stdexcept>

namespace probedock {

ClosureSchedule ClosureSchedule::along_track(double separation, double duration) {
  ClosureSchedule s;
  s.initial_closure = Vec3(-separation, 0.0, 0.0);
  s.duration = duration;
  return s;
}

void ClosureSchedule::validate() const {
  if (!(duration > 0.0)) throw std::invalid_argument("reference.approach_duration must be positive");
  if (!initial_closure.allFinite()) throw std::invalid_argument("reference.initial_closure must be finite");
}

BlendSample min_jerk_blend(double t, double duration) {
  BlendSample b;
  if (t <= 0.0) return b;
  if (t >= duration) {
    b.s = 1.0;
    return b;
  }
  const double tau = t / duration;
  const double tau2 = tau * tau;
  const double tau3 = tau2 * tau;
  b.s = tau3 * (10.0 - 15.0 * tau + 6.0 * tau2);
  b.s_dot = 30.0 * tau2 * (1.0 - 2.0 * tau + tau2) / duration;
  b.s_ddot = 60.0 * tau * (1.0 - 3.0 * tau + 2.0 * tau2) / (duration * duration);
  return b;
}

ClosureSample closure_at(double t, const ClosureSchedule& schedule) {
  const BlendSample b = min_jerk_blend(t, schedule.duration);
  ClosureSample c;
  c.closure = schedule.initial_closure * (1.0 - b.s);
  c.rate = -schedule.initial_closure * b.s_dot;
  c.acceleration = -schedule.initial_closure * b.s_ddot;
  return c;
}

ReferenceSample reference_at(double t, const ClosureSchedule& schedule, const PlantParams& params,
                             const DrogueState& drogue_initial, const ProbeGeometry& geom) {
  if (t < 0.0) throw std::invalid_argument("reference_at requires t >= 0");
  const DrogueState nominal = nominal_trajectory(t, params, drogue_initial);
  const ClosureSample c = closure_at(t, schedule);
  const Vec3 lever = rotation_matrix(params.trim(0.0)) * geom.x_bar;

  ReferenceSample ref;
  ref.drogue_position = nominal.position;
  ref.drogue_velocity = nominal.velocity;
  ref.probe_position = nominal.position + c.closure;
  ref.probe_velocity = nominal.velocity + c.rate;
  ref.cg_position = ref.probe_position - lever;
  ref.cg_velocity = ref.probe_velocity;
  ref.acceleration = nominal.acceleration + c.acceleration;
  ref.psi_dot = 0.0;
  return ref;
}

}  // namespace probedock
