#include "probedock/drogue.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "probedock/format.hpp"

namespace probedock {

DroguePerturbation::DroguePerturbation(const WindCondition& wind, const UncertaintyBounds& bounds,
                                       std::uint64_t seed, const PerturbationParams& params) {
  if (params.components_per_axis < 1) throw std::invalid_argument("drogue.components_per_axis must be >= 1");
  if (!(params.min_frequency_hz > 0.0) || params.max_frequency_hz < params.min_frequency_hz) {
    throw std::invalid_argument("drogue frequency band must satisfy 0 < min <= max");
  }
  if (params.vertical_fraction < 0.0 || params.vertical_fraction >= 1.0) {
    throw std::invalid_argument("drogue.vertical_fraction must lie in [0, 1)");
  }
  if (bounds.delta_D < 0.0) throw std::invalid_argument("bounds.delta_D must be non-negative");

  const double sign = wind.magnitude_kt < 0.0 ? -1.0 : 1.0;
  horizontal_axis_ = sign * Vec3(std::cos(wind.direction_rad), std::sin(wind.direction_rad), 0.0);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(params.min_frequency_hz, params.max_frequency_hz);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> weight(0.5, 1.0);

  auto draw = [&](std::vector<SwayComponent>& out, double share) {
    for (int i = 0; i < params.components_per_axis; ++i) {
      SwayComponent c;
      c.omega = 2.0 * std::numbers::pi * freq(rng);
      c.phase = phase(rng);
      c.amplitude = share * weight(rng);
      out.push_back(c);
    }
  };
  draw(horizontal_, 1.0 - params.vertical_fraction);
  draw(vertical_, params.vertical_fraction);

  // Rescale so sqrt((sum |a_h|)^2 + (sum |a_v|)^2), the sup of the offset acceleration norm,
  // equals delta_D at full-scale wind.
  const double scale_fraction = std::min(1.0, std::abs(wind.magnitude_kt) / params.full_scale_wind_kt);
  double sum_h = 0.0;
  double sum_v = 0.0;
  for (const auto& c : horizontal_) sum_h += c.amplitude;
  for (const auto& c : vertical_) sum_v += c.amplitude;
  const double raw = std::hypot(sum_h, sum_v);
  const double k = raw > 0.0 ? bounds.delta_D * scale_fraction / raw : 0.0;
  for (auto& c : horizontal_) c.amplitude *= k;
  for (auto& c : vertical_) c.amplitude *= k;
}

namespace {

// Position offset starts at zero; velocity and acceleration are its exact derivatives.
void accumulate(const std::vector<SwayComponent>& comps, double t, double& p, double& v, double& a) {
  for (const auto& c : comps) {
    const double arg = c.omega * t + c.phase;
    p -= c.amplitude / (c.omega * c.omega) * (std::sin(arg) - std::sin(c.phase));
    v -= c.amplitude / c.omega * std::cos(arg);
    a += c.amplitude * std::sin(arg);
  }
}

}  // namespace

DrogueState DroguePerturbation::offset(double t) const {
  double ph = 0.0, vh = 0.0, ah = 0.0;
  double pv = 0.0, vv = 0.0, av = 0.0;
  accumulate(horizontal_, t, ph, vh, ah);
  accumulate(vertical_, t, pv, vv, av);
  DrogueState out;
  out.position = horizontal_axis_ * ph + Vec3::UnitZ() * pv;
  out.velocity = horizontal_axis_ * vh + Vec3::UnitZ() * vv;
  out.acceleration = horizontal_axis_ * ah + Vec3::UnitZ() * av;
  return out;
}

double DroguePerturbation::acceleration_bound() const {
  double sum_h = 0.0;
  double sum_v = 0.0;
  for (const auto& c : horizontal_) sum_h += std::abs(c.amplitude);
  for (const auto& c : vertical_) sum_v += std::abs(c.amplitude);
  return std::hypot(sum_h, sum_v);
}

DrogueState nominal_trajectory(double t, const PlantParams& params, const DrogueState& initial) {
  if (t < 0.0) throw std::invalid_argument("nominal_trajectory requires t >= 0");
  DrogueState out;
  out.velocity = Vec3(params.tanker_speed, 0.0, 0.0);
  out.position = initial.position + out.velocity * t;
  out.acceleration = Vec3::Zero();
  return out;
}

DrogueState perturbed_trajectory(double t, const PlantParams& params, const DrogueState& initial,
                                 const DroguePerturbation& perturbation) {
  DrogueState out = nominal_trajectory(t, params, initial);
  const DrogueState d = perturbation.offset(t);
  out.position += d.position;
  out.velocity += d.velocity;
  out.acceleration += d.acceleration;
  return out;
}

DrogueState perturbed_trajectory(double t, const WindCondition& wind, const UncertaintyBounds& bounds,
                                 std::uint64_t seed, const PlantParams& params, const DrogueState& initial,
                                 const PerturbationParams& perturbation_params) {
  return perturbed_trajectory(t, params, initial, DroguePerturbation(wind, bounds, seed, perturbation_params));
}

DrogueState default_drogue_initial(const PlantParams& params) {
  DrogueState s;
  s.position = Vec3(5.0, 0.0, -1000.0);
  s.velocity = Vec3(params.tanker_speed, 0.0, 0.0);
  return s;
}

void write_drogue_csv(std::ostream& os, const std::vector<DrogueSample>& samples) {
  os << "t,X_D,Y_D,Z_D,u_D,v_D,w_D\n";
  for (const auto& s : samples) {
    os << fmt_num(s.t);
    for (int i = 0; i < 3; ++i) os << ',' << fmt_num(s.state.position(i));
    for (int i = 0; i < 3; ++i) os << ',' << fmt_num(s.state.velocity(i));
    os << '\n';
  }
}

}  // namespace probedock
