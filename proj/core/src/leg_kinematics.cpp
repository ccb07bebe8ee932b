#include "cot_atlas/leg_kinematics.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "cot_atlas/error.hpp"

namespace cot_atlas {

namespace {

struct PlanarTerms {
  double x;   // forward
  double zp;  // along the leg plane, negative below the hip
};

PlanarTerms planar(const LegGeometry& g, double q_hfe, double q_kfe) {
  const double s1 = std::sin(q_hfe), c1 = std::cos(q_hfe);
  const double s12 = std::sin(q_hfe + q_kfe), c12 = std::cos(q_hfe + q_kfe);
  return {-g.l_thigh * s1 - g.l_shank * s12, -g.l_thigh * c1 - g.l_shank * c12};
}

}  // namespace

void LegGeometry::validate() const {
  if (!(l_thigh > 0.0) || !(l_shank > 0.0) || !(hip_offset >= 0.0)) {
    throw Error(ErrorKind::InvariantViolation,
                "leg geometry requires l_thigh > 0, l_shank > 0, hip_offset >= 0");
  }
  if (side != 1.0 && side != -1.0) {
    throw Error(ErrorKind::InvariantViolation, "leg side must be +1 or -1");
  }
}

double LegGeometry::min_reach() const { return std::abs(l_thigh - l_shank); }

bool JointLimits::contains(const JointVector& q) const {
  return q.allFinite() && (q.array() >= lower.array()).all() && (q.array() <= upper.array()).all();
}

FootPoint forward_kinematics(const LegGeometry& g, const JointVector& q) {
  const auto [x, zp] = planar(g, q[1], q[2]);
  const double d = g.side * g.hip_offset;
  const double s0 = std::sin(q[0]), c0 = std::cos(q[0]);
  return {x, d * c0 - zp * s0, d * s0 + zp * c0};
}

IkSolution inverse_kinematics(const LegGeometry& g, const FootPoint& p) {
  auto unreachable = [&](const char* why) {
    std::ostringstream os;
    os << "foot target (" << p.x() << ", " << p.y() << ", " << p.z() << ") " << why;
    return Error(ErrorKind::Unreachable, os.str());
  };
  if (!p.allFinite()) throw unreachable("is not finite");

  const double d = g.side * g.hip_offset;
  const double r_yz2 = p.y() * p.y() + p.z() * p.z();
  const double zp2 = r_yz2 - d * d;
  if (zp2 < 0.0) throw unreachable("lies inside the abduction offset");
  const double zp = -std::sqrt(zp2);

  const double reach = std::hypot(p.x(), zp);
  const double lo = g.min_reach();
  const double hi = g.max_reach();
  if (reach > hi || reach < lo) throw unreachable("is outside the leg workspace");

  IkSolution sol;
  sol.near_singular = reach > hi - kReachEpsilon || reach < lo + kReachEpsilon;

  const double q_haa = std::atan2(p.z(), p.y()) - std::atan2(zp, d);

  double cos_knee = (reach * reach - g.l_thigh * g.l_thigh - g.l_shank * g.l_shank) /
                    (2.0 * g.l_thigh * g.l_shank);
  cos_knee = std::clamp(cos_knee, -1.0, 1.0);
  double q_kfe = std::acos(cos_knee);
  if (g.knee_branch == KneeBranch::KneeBack) q_kfe = -q_kfe;

  const double target_angle = std::atan2(-p.x(), -zp);
  const double offset = std::atan2(g.l_shank * std::sin(q_kfe), g.l_thigh + g.l_shank * std::cos(q_kfe));
  const double q_hfe = target_angle - offset;

  auto wrap = [](double a) { return std::remainder(a, 2.0 * kPi); };
  sol.q = JointVector(wrap(q_haa), wrap(q_hfe), q_kfe);
  return sol;
}

Mat3 jacobian(const LegGeometry& g, const JointVector& q) {
  const double s0 = std::sin(q[0]), c0 = std::cos(q[0]);
  const double s1 = std::sin(q[1]), c1 = std::cos(q[1]);
  const double s12 = std::sin(q[1] + q[2]), c12 = std::cos(q[1] + q[2]);
  const FootPoint p = forward_kinematics(g, q);

  // Planar partials (dx, dz') rotated by HAA.
  const double dx1 = -g.l_thigh * c1 - g.l_shank * c12;
  const double dz1 = g.l_thigh * s1 + g.l_shank * s12;
  const double dx2 = -g.l_shank * c12;
  const double dz2 = g.l_shank * s12;

  Mat3 J;
  J.col(0) << 0.0, -p.z(), p.y();
  J.col(1) << dx1, -dz1 * s0, dz1 * c0;
  J.col(2) << dx2, -dz2 * s0, dz2 * c0;
  return J;
}

JointRates joint_velocities_from_foot(const LegGeometry& g, const JointVector& q,
                                      const Vec3& foot_vel) {
  const Mat3 J = jacobian(g, q);
  const double det = J.determinant();
  if (std::abs(det) <= kSingularDetTolerance) {
    throw Error(ErrorKind::SingularJacobian, "|det J| = " + std::to_string(std::abs(det)));
  }
  return J.partialPivLu().solve(foot_vel);
}

JointTorques torques_from_foot_force(const LegGeometry& g, const JointVector& q,
                                     const Vec3& foot_force, const JointTorques& tau_free) {
  return jacobian(g, q).transpose() * foot_force + tau_free;
}

}  // namespace cot_atlas
