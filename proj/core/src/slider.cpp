#include <cmath>

#include "cot_atlas/dynamics.hpp"
#include "cot_atlas/error.hpp"

namespace cot_atlas {

SimState::SimState() {
  for (std::size_t i = 0; i < kNumLegs; ++i) {
    q[i].setZero();
    qd[i].setZero();
    tau[i].setZero();
    grf[i].setZero();
  }
}

namespace {

void check_finite_and_bounded(const SimState& s) {
  bool ok = std::isfinite(s.base_x) && std::isfinite(s.base_v) &&
            std::abs(s.base_x) < kBlowupLimit && std::abs(s.base_v) < kBlowupLimit;
  for (std::size_t i = 0; i < kNumLegs && ok; ++i) {
    ok = s.q[i].allFinite() && s.qd[i].allFinite() &&
         s.q[i].cwiseAbs().maxCoeff() < kBlowupLimit &&
         s.qd[i].cwiseAbs().maxCoeff() < kBlowupLimit &&
         s.grf[i].allFinite() && s.grf[i].cwiseAbs().maxCoeff() < kBlowupLimit;
  }
  if (!ok) throw Error(ErrorKind::NumericalBlowup, "state exceeded 1e6 at t = " + std::to_string(s.t));
}

struct FootStep {
  LegRateSolution rates;
  Vec3 force = Vec3::Zero();  // ground on foot
  bool contact = false;
  bool slipping = false;
};

FootStep step_foot(const Mat3& jac, const Mat3& mass, const JointVector& q, const JointRates& qd,
                   const JointReference& ref, const LegCommand& command,
                   const JointTorques& tau_gravity, double penetration, double foot_x,
                   double anchor_x, double base_v, double mu_s, double mu_d,
                   const ContactModel& contact, double dt) {
  FootStep out;
  auto solve = [&](const FootGround& g) {
    return solve_leg_rates(jac, mass, q, qd, ref, command.gains, command.tau_max, g, tau_gravity, dt);
  };
  if (penetration > 0.0) {
    const double spring_n = contact.k_n * penetration;

    FootGround stick;
    stick.force0 = Vec3(-contact.k_n * (foot_x - anchor_x) - contact.d_n * base_v, 0.0, spring_n);
    stick.damping(0, 0) = contact.d_n;
    stick.damping(2, 2) = contact.d_n;
    LegRateSolution r = solve(stick);
    Vec3 f = stick.force0 - stick.damping * (jac * r.qd);

    if (f.z() > 0.0 && std::abs(f.x()) > mu_s * f.z()) {
      const Vec3 dir(std::copysign(mu_d, f.x()), 0.0, 1.0);
      FootGround slip;
      slip.force0 = dir * spring_n;
      slip.damping.col(2) = dir * contact.d_n;
      r = solve(slip);
      f = slip.force0 - slip.damping * (jac * r.qd);
      out.slipping = true;
    }
    if (f.z() > 0.0) {
      out.rates = r;
      out.force = f;
      out.contact = true;
      return out;
    }
    out.slipping = false;
  }
  out.rates = solve(FootGround{});
  return out;
}

}  // namespace

SimState step_slider(const SimState& state, const LegCommand& command, const TerrainSpec& terrain,
                     const RobotSpec& robot, const ContactModel& contact, double dt) {
  SimState next = state;
  const double alpha = terrain.alpha();
  const double weight = robot.weight(terrain.g);
  const Vec3 gravity(terrain.g * std::sin(alpha), 0.0, -terrain.g * std::cos(alpha));

  double foot_normal_sum = 0.0;
  double foot_tangential_sum = 0.0;

  for (Leg leg : kAllLegs) {
    const std::size_t i = index(leg);
    const LegGeometry& geom = robot.leg(leg);
    const Mat3 jac = jacobian(geom, state.q[i]);
    const FootPoint p = forward_kinematics(geom, state.q[i]);

    Mat3 mass = Mat3::Zero();
    JointTorques tau_gravity = JointTorques::Zero();
    if (robot.slider_limb_inertia) {
      mass = limb_mass_matrix(geom, state.q[i], robot.joint_inertia, robot.thigh_mass,
                              robot.shank_mass);
      tau_gravity =
          limb_gravity_torque(geom, state.q[i], robot.thigh_mass, robot.shank_mass, gravity);
    }

    const double height = state.base_height + p.z();
    const double foot_x = state.base_x + robot.hip_position(leg).x() + p.x();
    const double anchor = state.contact[i] ? state.anchor_x[i] : foot_x;

    const FootStep fs = step_foot(jac, mass, state.q[i], state.qd[i], command.refs[i], command,
                                  tau_gravity, -height, foot_x, anchor, state.base_v, contact.foot_static(terrain),
                                  contact.foot_dynamic(terrain), contact, dt);
    next.contact[i] = fs.contact;
    next.slipping[i] = fs.slipping;
    next.grf[i] = fs.force;
    next.tau[i] = fs.rates.tau;
    next.saturated[i] = fs.rates.saturated_joints;
    next.qd[i] = fs.rates.qd;
    next.q[i] = state.q[i] + dt * fs.rates.qd;
    if (!fs.contact) {
      next.anchor_x[i] = 0.0;
    } else if (fs.slipping) {
      // Drag the anchor so the spring carries exactly the kinetic force.
      next.anchor_x[i] = foot_x + fs.force.x() / contact.k_n;
    } else {
      next.anchor_x[i] = anchor;
    }
    foot_normal_sum += fs.force.z();
    foot_tangential_sum += fs.force.x();
  }

  // Base: gravity along the slope, foot reactions, torso Coulomb friction.
  next.torso_normal = std::max(0.0, weight * std::cos(alpha) - foot_normal_sum);
  const double applied = weight * std::sin(alpha) + foot_tangential_sum;
  next.torso_friction =
      coulomb_friction(next.torso_normal, state.base_v, applied, terrain.mu_s, terrain.mu_d,
                       contact.v_stick, robot.mass / dt);
  const double accel = (applied + next.torso_friction) / robot.mass;
  next.base_v = state.base_v + dt * accel;
  next.base_x = state.base_x + dt * next.base_v;

  next.t = state.t + dt;
  check_finite_and_bounded(next);
  return next;
}

}  // namespace cot_atlas
