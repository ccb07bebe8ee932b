#include "cot_atlas/trajectory_gen.hpp"

#include <cmath>

#include "cot_atlas/error.hpp"

namespace cot_atlas {

void SlideTrajParams::validate() const {
  const bool ok = f > 0.0 && f_s >= 10.0 * f && l_swing > 0.0 && l_plus > 0.0 &&
                  l_plus <= l_swing && h_swing >= 0.0 && z0 > 0.0 && v >= 0.0 &&
                  alpha_filter > 0.0 && alpha_filter < 1.0;
  if (!ok) throw Error(ErrorKind::InvariantViolation, "invalid sliding trajectory parameters");
}

Phase phase(const SlideTrajParams& params, std::int64_t k, double phase_offset) {
  const double t = static_cast<double>(k) / params.f_s;
  const double phi = 2.0 * kPi * params.f * t + phase_offset;
  return {phi, std::sin(phi), std::cos(phi)};
}

Vec3 front_swing(const SlideTrajParams& params, std::int64_t k, double phase_offset) {
  if (params.v <= 0.0) return {0.0, 0.0, -params.z0};
  const auto [phi, s, c] = phase(params, k, phase_offset);
  const double a = params.amplitude_scale();
  const double x = s >= 0.0 ? a * params.l_plus * s : a * params.l_swing * s;
  const double z = -params.z0 + a * params.h_swing * c;
  return {x, 0.0, z};
}

Vec3 front_swing_velocity(const SlideTrajParams& params, std::int64_t k, double phase_offset) {
  if (params.v <= 0.0) return Vec3::Zero();
  const auto [phi, s, c] = phase(params, k, phase_offset);
  const double a = params.amplitude_scale();
  const double omega = 2.0 * kPi * params.f;
  double amplitude;
  if (s > 0.0) {
    amplitude = params.l_plus;
  } else if (s < 0.0) {
    amplitude = params.l_swing;
  } else {
    // s rising through zero (c > 0) comes from the negative branch.
    amplitude = c > 0.0 ? params.l_swing : params.l_plus;
  }
  return {a * amplitude * omega * c, 0.0, -a * params.h_swing * omega * s};
}

HomePose default_slide_home(double hip_offset) {
  const double y = hip_offset;
  HomePose home;
  home[index(Leg::LF)] = FootPoint(0.10, y, -0.12);
  home[index(Leg::RF)] = FootPoint(0.10, -y, -0.12);
  home[index(Leg::LH)] = FootPoint(-0.05, y, -0.12);
  home[index(Leg::RH)] = FootPoint(-0.05, -y, -0.12);
  return home;
}

PerLeg<FootReference> foot_reference(const SlideTrajParams& params, std::int64_t k,
                                     const HomePose& home, double phase_offset) {
  const Vec3 swing = front_swing(params, k, phase_offset);
  const Vec3 swing_vel = front_swing_velocity(params, k, phase_offset);
  PerLeg<FootReference> refs;
  for (Leg leg : kAllLegs) {
    auto& r = refs[index(leg)];
    r.position = home[index(leg)];
    if (is_front(leg)) {
      r.position += swing;
      r.velocity = swing_vel;
    }
  }
  return refs;
}

HomePose smooth_home(const HomePose& current, const HomePose& input, double alpha_filter) {
  HomePose next;
  for (std::size_t i = 0; i < kNumLegs; ++i) {
    next[i] = (1.0 - alpha_filter) * current[i] + alpha_filter * input[i];
  }
  return next;
}

JointReference joint_reference(const LegGeometry& geom, const FootReference& ref) {
  JointReference out;
  out.q = inverse_kinematics(geom, ref.position).q;
  out.qd = joint_velocities_from_foot(geom, out.q, ref.velocity);
  return out;
}

}  // namespace cot_atlas
