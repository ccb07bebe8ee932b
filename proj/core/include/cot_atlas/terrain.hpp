#pragma once

#include "cot_atlas/leg_kinematics.hpp"
#include "cot_atlas/trajectory_gen.hpp"
#include "cot_atlas/types.hpp"

namespace cot_atlas {

inline constexpr double kLunarGravity = 1.625;
inline constexpr double kDynamicFrictionRatio = 0.85;

struct TerrainSpec {
  double alpha_deg = 0.0;  // downhill slope
  double mu_s = 0.6;
  double mu_d = kDynamicFrictionRatio * 0.6;
  double g = kLunarGravity;
  bool mu_d_override = false;

  static TerrainSpec make(double alpha_deg, double mu_s, double g = kLunarGravity);

  // Enforces mu_d = 0.85 mu_s unless overridden. The study ranges
  // (alpha in [0, 35] deg, mu_s in [0.4, 0.8]) are enforced unless
  // allow_extended is set.
  void validate(bool allow_extended = false) const;
  double alpha() const { return deg2rad(alpha_deg); }
};

struct RobotSpec {
  double mass = 24.0;
  double patch_length = 0.60;
  double patch_width = 0.30;
  double hip_x = 0.24;  // longitudinal hip offset from the base centre
  double hip_y = 0.13;
  double slide_hip_height = 0.20;   // hip height above ground with the torso on the ground
  double walk_height = 0.32;        // standing hip height while walking
  double joint_inertia = 0.02;      // reflected actuator + link inertia per joint, kg m^2
  double thigh_mass = 1.0;          // point masses of the limb model
  double shank_mass = 0.3;
  bool slider_limb_inertia = false;  // give the slider legs mass (default: massless)
  PerLeg<LegGeometry> legs = default_legs();
  HomePose slide_home = default_slide_home();

  static PerLeg<LegGeometry> default_legs();
  void validate() const;

  Vec3 hip_position(Leg leg) const;
  const LegGeometry& leg(Leg l) const { return legs[index(l)]; }
  double weight(double g) const { return mass * g; }
};

// Penalty contact, also used as the tangential stick spring of the feet.
struct ContactModel {
  double k_n = 2.0e4;
  double d_n = 100.0;
  double v_stick = 1.0e-3;
  // Foot pad friction, shared by both modes. The terrain coefficient is the
  // torso–ground one; a value <= 0 makes the feet use it too.
  double foot_mu_s = 0.7;

  double foot_static(const TerrainSpec& t) const { return foot_mu_s > 0.0 ? foot_mu_s : t.mu_s; }
  double foot_dynamic(const TerrainSpec& t) const {
    return foot_mu_s > 0.0 ? kDynamicFrictionRatio * foot_mu_s : t.mu_d;
  }

  void validate() const;
};

// Regularized Coulomb friction. Outside the stick band (|v_t| > v_stick) the
// force is kinetic, -sign(v_t) mu_d N. Inside it the force cancels the applied
// tangential load plus a linear velocity term stick_gain * v_t, bounded by
// mu_s N; beyond that bound the contact breaks away with mu_d N. A negative
// stick_gain selects mu_s N / v_stick.
double coulomb_friction(double normal_force, double tangential_velocity, double applied_load,
                        double mu_s, double mu_d, double v_stick, double stick_gain = -1.0);

}  // namespace cot_atlas
