#include "cot_atlas/terrain.hpp"

#include <cmath>

#include "cot_atlas/error.hpp"

namespace cot_atlas {

TerrainSpec TerrainSpec::make(double alpha_deg, double mu_s, double g) {
  TerrainSpec t;
  t.alpha_deg = alpha_deg;
  t.mu_s = mu_s;
  t.mu_d = kDynamicFrictionRatio * mu_s;
  t.g = g;
  return t;
}

void TerrainSpec::validate(bool allow_extended) const {
  if (!(g > 0.0) || !(mu_s >= 0.0) || !(mu_d >= 0.0) || !(alpha_deg >= 0.0 && alpha_deg < 90.0)) {
    throw Error(ErrorKind::InvariantViolation, "terrain: need g > 0, mu >= 0, alpha in [0, 90)");
  }
  if (!mu_d_override && std::abs(mu_d - kDynamicFrictionRatio * mu_s) > 1e-12) {
    throw Error(ErrorKind::InvariantViolation,
                "terrain: mu_d must equal 0.85 mu_s unless mu_d_override is set");
  }
  if (mu_d > mu_s) {
    throw Error(ErrorKind::InvariantViolation, "terrain: mu_d exceeds mu_s");
  }
  if (!allow_extended) {
    if (alpha_deg > 35.0) {
      throw Error(ErrorKind::InvariantViolation,
                  "terrain: alpha_deg outside [0, 35] (use --allow-extended-ranges)");
    }
    if (mu_s < 0.4 - 1e-12 || mu_s > 0.8 + 1e-12) {
      throw Error(ErrorKind::InvariantViolation,
                  "terrain: mu_s outside [0.4, 0.8] (use --allow-extended-ranges)");
    }
  }
}

PerLeg<LegGeometry> RobotSpec::default_legs() {
  PerLeg<LegGeometry> legs;
  for (Leg leg : kAllLegs) {
    auto& g = legs[index(leg)];
    g.side = is_left(leg) ? 1.0 : -1.0;
    g.knee_branch = KneeBranch::KneeBack;
  }
  return legs;
}

void RobotSpec::validate() const {
  if (!(mass > 0.0) || !(patch_length > 0.0) || !(patch_width > 0.0) || !(joint_inertia > 0.0) ||
      !(slide_hip_height > 0.0) || !(walk_height > 0.0) || !(thigh_mass >= 0.0) ||
      !(shank_mass >= 0.0)) {
    throw Error(ErrorKind::InvariantViolation, "robot: masses, inertia and dimensions must be positive");
  }
  for (const auto& g : legs) g.validate();
}

Vec3 RobotSpec::hip_position(Leg leg) const {
  return {is_front(leg) ? hip_x : -hip_x, is_left(leg) ? hip_y : -hip_y, 0.0};
}

void ContactModel::validate() const {
  if (!(k_n > 0.0) || !(d_n >= 0.0) || !(v_stick > 0.0)) {
    throw Error(ErrorKind::InvariantViolation, "contact: need k_n > 0, d_n >= 0, v_stick > 0");
  }
}

double coulomb_friction(double normal_force, double v_t, double applied_load, double mu_s,
                        double mu_d, double v_stick, double stick_gain) {
  const double n = std::max(normal_force, 0.0);
  if (n == 0.0) return 0.0;
  if (std::abs(v_t) > v_stick) return -std::copysign(mu_d * n, v_t);

  const double gain = stick_gain < 0.0 ? mu_s * n / v_stick : stick_gain;
  const double needed = -applied_load - gain * v_t;
  if (std::abs(needed) <= mu_s * n) return needed;
  return std::copysign(mu_d * n, needed);
}

}  // namespace cot_atlas
