#include <cmath>

#include <Eigen/Dense>

#include "cot_atlas/dynamics.hpp"
#include "cot_atlas/error.hpp"

namespace cot_atlas {

StanceForces distribute_stance_forces(const PerLeg<Vec3>& foot_positions,
                                      const PerLeg<bool>& stance, double com_height,
                                      const TerrainSpec& terrain, double mass, double foot_mu_s) {
  std::array<std::size_t, kNumLegs> ids{};
  int n = 0;
  for (std::size_t i = 0; i < kNumLegs; ++i) {
    if (stance[i]) ids[n++] = i;
  }
  if (n < 3) {
    throw Error(ErrorKind::FrictionConeInfeasible, "fewer than three stance feet");
  }

  const double alpha = terrain.alpha();
  const double weight = mass * terrain.g;
  const double normal_total = weight * std::cos(alpha);
  const double downhill_total = weight * std::sin(alpha);

  // Sum N = W cos(a); sum x_i N_i = h W sin(a) (load shifts to the downhill feet).
  Eigen::Matrix<double, 2, Eigen::Dynamic> a(2, n);
  for (int j = 0; j < n; ++j) {
    a(0, j) = 1.0;
    a(1, j) = foot_positions[ids[j]].x();
  }
  const Eigen::Vector2d b(normal_total, com_height * downhill_total);
  const Eigen::VectorXd normals = a.completeOrthogonalDecomposition().solve(b);

  if ((a * normals - b).norm() > 1e-9 * weight) {
    throw Error(ErrorKind::FrictionConeInfeasible, "stance feet cannot balance the pitch moment");
  }
  for (int j = 0; j < n; ++j) {
    if (normals[j] < 0.0) {
      throw Error(ErrorKind::FrictionConeInfeasible, "support polygon does not contain the load");
    }
  }

  StanceForces out;
  Eigen::VectorXd tangential = Eigen::VectorXd::Zero(n);
  std::array<bool, kNumLegs> capped{};
  double remaining = downhill_total;
  int free_count = n;
  for (int round = 0; round < n && remaining > 0.0; ++round) {
    const double share = remaining / free_count;
    bool changed = false;
    for (int j = 0; j < n; ++j) {
      const double cap = foot_mu_s * normals[j];
      if (!capped[j] && cap < share) {
        capped[j] = true;
        tangential[j] = cap;
        remaining -= cap;
        --free_count;
        changed = true;
      }
    }
    if (!changed) {
      for (int j = 0; j < n; ++j) {
        if (!capped[j]) tangential[j] = share;
      }
      remaining = 0.0;
    } else if (free_count == 0) {
      break;
    }
  }
  if (remaining > 1e-12 * weight) {
    throw Error(ErrorKind::FrictionConeInfeasible,
                "downhill load exceeds the friction cones of all stance feet");
  }

  for (int j = 0; j < n; ++j) {
    const std::size_t i = ids[j];
    out.grf[i] = Vec3(-tangential[j], 0.0, normals[j]);
    out.saturated[i] = capped[j];
    if (capped[j]) ++out.saturated_count;
  }
  for (std::size_t i = 0; i < kNumLegs; ++i) {
    if (!stance[i]) out.grf[i].setZero();
  }
  return out;
}

SimState step_walker(const SimState& state, const WalkerInput& input, const TerrainSpec& terrain,
                     const RobotSpec& robot, const ContactModel& contact, double dt) {
  SimState next = state;
  const auto& tick = input.tick;
  const double alpha = terrain.alpha();
  const Vec3 gravity(terrain.g * std::sin(alpha), 0.0, -terrain.g * std::cos(alpha));

  PerLeg<Vec3> feet;
  for (Leg leg : kAllLegs) {
    feet[index(leg)] = robot.hip_position(leg) + tick.refs[index(leg)].position;
  }
  const StanceForces forces =
      distribute_stance_forces(feet, tick.stance, robot.walk_height, terrain, robot.mass,
                               contact.foot_static(terrain));

  for (Leg leg : kAllLegs) {
    const std::size_t i = index(leg);
    const LegGeometry& geom = robot.leg(leg);
    next.grf[i] = forces.grf[i];
    next.slipping[i] = forces.saturated[i];
    next.contact[i] = tick.stance[i];
    if (tick.stance[i]) {
      const JointReference ref = joint_reference(geom, tick.refs[i]);
      next.q[i] = ref.q;
      next.qd[i] = ref.qd;
      // Actuators hold the foot against the ground force: tau = J^T (-F_ground).
      next.tau[i] = torques_from_foot_force(geom, ref.q, -forces.grf[i]);
      next.saturated[i] = 0;
    } else {
      const Mat3 jac = jacobian(geom, state.q[i]);
      const Mat3 mass = limb_mass_matrix(geom, state.q[i], robot.joint_inertia, robot.thigh_mass,
                                         robot.shank_mass);
      const JointTorques tau_gravity =
          limb_gravity_torque(geom, state.q[i], robot.thigh_mass, robot.shank_mass, gravity);
      const LegRateSolution r =
          solve_leg_rates(jac, mass, state.q[i], state.qd[i], input.command.refs[i],
                          input.command.gains, input.command.tau_max, FootGround{}, tau_gravity, dt);
      next.tau[i] = r.tau;
      next.saturated[i] = r.saturated_joints;
      next.qd[i] = r.qd;
      next.q[i] = state.q[i] + dt * r.qd;
    }
  }

  const int n_stance = tick.stance_count();
  const double step = input.v * dt;
  next.base_v = input.v;
  next.base_x = state.base_x + step;
  next.slip = state.slip + step * static_cast<double>(forces.saturated_count) / n_stance;
  next.torso_normal = 0.0;
  next.torso_friction = 0.0;
  next.t = state.t + dt;
  return next;
}

}  // namespace cot_atlas
