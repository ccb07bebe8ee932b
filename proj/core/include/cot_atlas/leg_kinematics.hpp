#pragma once

#include "cot_atlas/types.hpp"

namespace cot_atlas {

enum class KneeBranch { KneeBack, KneeForward };

// Three-joint leg: HAA rotates about the hip-frame x axis, HFE and KFE about
// the (abducted) y axis. The zero configuration is the fully extended leg
// pointing straight down. Positive HFE swings the foot backward; the
// knee-back branch has q_kfe < 0.
struct LegGeometry {
  double hip_offset = 0.083;  // lateral abduction link, m
  double l_thigh = 0.25;
  double l_shank = 0.25;
  double side = +1.0;  // +1 left, -1 right
  KneeBranch knee_branch = KneeBranch::KneeBack;

  void validate() const;
  double max_reach() const { return l_thigh + l_shank; }
  double min_reach() const;
};

struct JointLimits {
  JointVector lower = JointVector::Constant(-kPi);
  JointVector upper = JointVector::Constant(kPi);

  bool contains(const JointVector& q) const;
};

inline constexpr double kReachEpsilon = 1e-6;
inline constexpr double kSingularDetTolerance = 1e-8;

struct IkSolution {
  JointVector q = JointVector::Zero();
  // Target lies within kReachEpsilon of full extension or retraction. The
  // position is still valid; velocity mapping near it is not.
  bool near_singular = false;
};

FootPoint forward_kinematics(const LegGeometry& geom, const JointVector& q);

// Throws Error(Unreachable) outside the annulus.
IkSolution inverse_kinematics(const LegGeometry& geom, const FootPoint& p);

Mat3 jacobian(const LegGeometry& geom, const JointVector& q);

// Solves J qd = foot_vel. Throws Error(SingularJacobian) when |det J| <= 1e-8.
JointRates joint_velocities_from_foot(const LegGeometry& geom, const JointVector& q,
                                      const Vec3& foot_vel);

// tau = J^T F + tau_free
JointTorques torques_from_foot_force(const LegGeometry& geom, const JointVector& q,
                                     const Vec3& foot_force,
                                     const JointTorques& tau_free = JointTorques::Zero());

}  // namespace cot_atlas
