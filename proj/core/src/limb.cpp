#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "cot_atlas/dynamics.hpp"

namespace cot_atlas {

namespace {

struct LimbJacobians {
  Mat3 thigh;
  Mat3 shank;
};

LimbJacobians limb_jacobians(const LegGeometry& geom, const JointVector& q) {
  LegGeometry mid_thigh = geom;
  mid_thigh.l_thigh = 0.5 * geom.l_thigh;
  mid_thigh.l_shank = 0.0;
  LegGeometry mid_shank = geom;
  mid_shank.l_shank = 0.5 * geom.l_shank;
  return {jacobian(mid_thigh, q), jacobian(mid_shank, q)};
}

}  // namespace

Mat3 limb_mass_matrix(const LegGeometry& geom, const JointVector& q, double joint_inertia,
                      double thigh_mass, double shank_mass) {
  const LimbJacobians j = limb_jacobians(geom, q);
  return joint_inertia * Mat3::Identity() + thigh_mass * j.thigh.transpose() * j.thigh +
         shank_mass * j.shank.transpose() * j.shank;
}

JointTorques limb_gravity_torque(const LegGeometry& geom, const JointVector& q,
                                 double thigh_mass, double shank_mass, const Vec3& gravity) {
  const LimbJacobians j = limb_jacobians(geom, q);
  return j.thigh.transpose() * (thigh_mass * gravity) + j.shank.transpose() * (shank_mass * gravity);
}

LegRateSolution solve_leg_rates(const Mat3& jac, const Mat3& mass, const JointVector& q,
                                const JointRates& qd, const JointReference& ref,
                                const ImpedanceGains& gains, double tau_max,
                                const FootGround& ground, const JointTorques& tau_gravity,
                                double dt) {
  const Mat3 k = gains.k_q.asDiagonal();
  const Mat3 d = gains.d_q.asDiagonal();
  const Mat3 ground_damping = jac.transpose() * ground.damping * jac;
  const Vec3 load = jac.transpose() * ground.force0 + tau_gravity + mass * qd / dt;

  // Rows: inertial + ground part, plus the actuator part for unsaturated joints.
  Mat3 a = mass / dt + ground_damping + d;
  Vec3 b = load + k * (ref.q - q) + d * ref.qd;

  LegRateSolution out;
  out.qd = a.partialPivLu().solve(b);
  out.tau = impedance_torque(gains, ref.q, ref.qd, q, out.qd);

  std::array<bool, 3> held{};
  for (int pass = 0; pass < 3; ++pass) {
    bool changed = false;
    for (int j = 0; j < 3; ++j) {
      if (!held[j] && std::abs(out.tau[j]) > tau_max) {
        held[j] = true;
        changed = true;
        a.row(j) = (mass / dt + ground_damping).row(j);
        b[j] = load[j] + std::copysign(tau_max, out.tau[j]);
      }
    }
    if (!changed) break;
    // A held joint with nothing to push against would accelerate without bound.
    if (std::abs(a.determinant()) < 1e-12) break;
    out.qd = a.partialPivLu().solve(b);
    const JointTorques free_tau = impedance_torque(gains, ref.q, ref.qd, q, out.qd);
    for (int j = 0; j < 3; ++j) {
      out.tau[j] = held[j] ? std::copysign(tau_max, b[j] - load[j]) : free_tau[j];
    }
  }
  for (int j = 0; j < 3; ++j) {
    if (held[j]) ++out.saturated_joints;
    out.tau[j] = std::clamp(out.tau[j], -tau_max, tau_max);
  }
  return out;
}

}  // namespace cot_atlas
