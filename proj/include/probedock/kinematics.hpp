// Euler-angle rotation kinematics for the probe lever arm.
//
// Attitudes follow the Z-Y-X (yaw-pitch-roll) sequence: R = Rz(psi) Ry(theta) Rx(phi)
// maps body-frame vectors into NED. Time derivatives are taken analytically along an
// Euler-angle trajectory, so callers pass Euler rates (phi_dot, theta_dot, psi_dot),
// not body rates.

#ifndef PROBEDOCK_KINEMATICS_HPP
#define PROBEDOCK_KINEMATICS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace probedock {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec3 = Vector3<double>;
using Mat3 = Matrix3<double>;

/// Pitch magnitude beyond which the Euler parameterization is rejected.
inline constexpr double kPitchSingularityGuard = std::numbers::pi / 2.0 - 1e-3;

class SingularAttitudeError : public std::domain_error {
 public:
  explicit SingularAttitudeError(const std::string& what) : std::domain_error(what) {}
};

template <typename Scalar = double>
struct Attitude {
  Scalar phi{0};    // roll (rad)
  Scalar theta{0};  // pitch (rad)
  Scalar psi{0};    // yaw (rad)
};

/// Euler-angle rates, or Euler-angle accelerations when used for the second derivative.
template <typename Scalar = double>
struct AngularRates {
  Scalar phi_dot{0};
  Scalar theta_dot{0};
  Scalar psi_dot{0};
};

/// Probe-tip offset from the CG, body frame (m).
struct ProbeGeometry {
  Vec3 x_bar{Vec3::Zero()};
};

template <typename Scalar>
void check_attitude(const Attitude<Scalar>& att) {
  using std::abs;
  using std::isfinite;
  if (!isfinite(att.phi) || !isfinite(att.theta) || !isfinite(att.psi)) {
    throw SingularAttitudeError("attitude contains non-finite angle");
  }
  if (abs(att.theta) >= Scalar(kPitchSingularityGuard)) {
    throw SingularAttitudeError("pitch " + std::to_string(static_cast<double>(att.theta)) +
                                " rad is inside the Euler singularity guard");
  }
}

namespace detail {

// Elementary rotation about a body axis and its first/second derivatives w.r.t. the angle.
// order 0: R(a), 1: dR/da, 2: d2R/da2.
template <typename Scalar>
Matrix3<Scalar> axis_rotation(int axis, Scalar a, int order) {
  using std::cos;
  using std::sin;
  Scalar c = cos(a);
  Scalar s = sin(a);
  // d/da [c, s] = [-s, c]; d2/da2 = [-c, -s]
  Scalar one{1};
  Scalar zero{0};
  if (order == 1) {
    Scalar c1 = -s;
    s = c;
    c = c1;
    one = zero;
  } else if (order == 2) {
    c = -c;
    s = -s;
    one = zero;
  }
  Matrix3<Scalar> m;
  switch (axis) {
    case 0:
      m << one, zero, zero, zero, c, -s, zero, s, c;
      break;
    case 1:
      m << c, zero, s, zero, one, zero, -s, zero, c;
      break;
    default:
      m << c, -s, zero, s, c, zero, zero, zero, one;
      break;
  }
  return m;
}

}  // namespace detail

/// Body-to-NED rotation, Z-Y-X sequence.
template <typename Scalar>
Matrix3<Scalar> rotation_matrix(const Attitude<Scalar>& att) {
  check_attitude(att);
  return detail::axis_rotation<Scalar>(2, att.psi, 0) * detail::axis_rotation<Scalar>(1, att.theta, 0) *
         detail::axis_rotation<Scalar>(0, att.phi, 0);
}

/// dR/dt along an Euler-angle trajectory passing through `att` with the given rates.
template <typename Scalar>
Matrix3<Scalar> rotation_matrix_dot(const Attitude<Scalar>& att, const AngularRates<Scalar>& rates) {
  check_attitude(att);
  using detail::axis_rotation;
  const Matrix3<Scalar> rz = axis_rotation<Scalar>(2, att.psi, 0);
  const Matrix3<Scalar> ry = axis_rotation<Scalar>(1, att.theta, 0);
  const Matrix3<Scalar> rx = axis_rotation<Scalar>(0, att.phi, 0);
  const Matrix3<Scalar> dz = axis_rotation<Scalar>(2, att.psi, 1) * rates.psi_dot;
  const Matrix3<Scalar> dy = axis_rotation<Scalar>(1, att.theta, 1) * rates.theta_dot;
  const Matrix3<Scalar> dx = axis_rotation<Scalar>(0, att.phi, 1) * rates.phi_dot;
  return dz * ry * rx + rz * dy * rx + rz * ry * dx;
}

/// d2R/dt2 given Euler rates and Euler accelerations.
template <typename Scalar>
Matrix3<Scalar> rotation_matrix_ddot(const Attitude<Scalar>& att, const AngularRates<Scalar>& rates,
                                     const AngularRates<Scalar>& accels) {
  check_attitude(att);
  using detail::axis_rotation;
  const Matrix3<Scalar> rz = axis_rotation<Scalar>(2, att.psi, 0);
  const Matrix3<Scalar> ry = axis_rotation<Scalar>(1, att.theta, 0);
  const Matrix3<Scalar> rx = axis_rotation<Scalar>(0, att.phi, 0);
  const Matrix3<Scalar> dz = axis_rotation<Scalar>(2, att.psi, 1) * rates.psi_dot;
  const Matrix3<Scalar> dy = axis_rotation<Scalar>(1, att.theta, 1) * rates.theta_dot;
  const Matrix3<Scalar> dx = axis_rotation<Scalar>(0, att.phi, 1) * rates.phi_dot;
  // chain rule: d/dt [R'(a) a_dot] = R''(a) a_dot^2 + R'(a) a_ddot
  const Matrix3<Scalar> ddz = axis_rotation<Scalar>(2, att.psi, 2) * (rates.psi_dot * rates.psi_dot) +
                              axis_rotation<Scalar>(2, att.psi, 1) * accels.psi_dot;
  const Matrix3<Scalar> ddy = axis_rotation<Scalar>(1, att.theta, 2) * (rates.theta_dot * rates.theta_dot) +
                              axis_rotation<Scalar>(1, att.theta, 1) * accels.theta_dot;
  const Matrix3<Scalar> ddx = axis_rotation<Scalar>(0, att.phi, 2) * (rates.phi_dot * rates.phi_dot) +
                              axis_rotation<Scalar>(0, att.phi, 1) * accels.phi_dot;
  return ddz * ry * rx + rz * ddy * rx + rz * ry * ddx +
         Scalar(2) * (dz * dy * rx + dz * ry * dx + rz * dy * dx);
}

}  // namespace probedock

#endif  // PROBEDOCK_KINEMATICS_HPP
