#pragma once

#include <cstdint>

#include "cot_atlas/leg_kinematics.hpp"
#include "cot_atlas/types.hpp"

namespace cot_atlas {

struct SlideTrajParams {
  double f = 1.5;      // step frequency, Hz
  double f_s = 500.0;  // control (task servo) rate, Hz
  double l_swing = 0.15;
  double l_plus = 0.05;
  double h_swing = 0.06;
  double z0 = 0.05;
  double v = 1.0;  // commanded thrust velocity, m/s
  double alpha_filter = 0.05;
  // Divide v by a 1 m/s reference so that v * L stays a length.
  // Numerically a no-op; it only changes the unit bookkeeping.
  bool normalize_amplitude = false;

  void validate() const;
  double dt() const { return 1.0 / f_s; }
  double amplitude_scale() const { return normalize_amplitude ? v / 1.0 : v; }
};

struct Phase {
  double phi;
  double s;
  double c;
};

// phi_k = 2 pi f t_k + offset, t_k = k / f_s.
Phase phase(const SlideTrajParams& params, std::int64_t k, double phase_offset = 0.0);

// Front-foot swing offset (x, y, z) at tick k.
Vec3 front_swing(const SlideTrajParams& params, std::int64_t k, double phase_offset = 0.0);

// Analytic time derivative of front_swing. At s_k == 0 the incoming branch is used.
Vec3 front_swing_velocity(const SlideTrajParams& params, std::int64_t k, double phase_offset = 0.0);

struct FootReference {
  FootPoint position = FootPoint::Zero();
  Vec3 velocity = Vec3::Zero();
};

using HomePose = PerLeg<FootPoint>;

// Nominal sliding posture: front feet forward with ground clearance, hind legs tucked.
HomePose default_slide_home(double hip_offset = 0.083);

// LF and RF receive home + swing offset; hind legs stay at home.
PerLeg<FootReference> foot_reference(const SlideTrajParams& params, std::int64_t k,
                                     const HomePose& home, double phase_offset = 0.0);

// next = (1 - alpha) * current + alpha * input
HomePose smooth_home(const HomePose& current, const HomePose& input, double alpha_filter);

struct JointReference {
  JointVector q = JointVector::Zero();
  JointRates qd = JointRates::Zero();
};

// IK and inverse-Jacobian mapping of a foot reference. Throws Unreachable or
// SingularJacobian.
JointReference joint_reference(const LegGeometry& geom, const FootReference& ref);

}  // namespace cot_atlas
