#pragma once

#include "cot_atlas/controllers.hpp"
#include "cot_atlas/terrain.hpp"
#include "cot_atlas/trajectory_gen.hpp"
#include "cot_atlas/types.hpp"

namespace cot_atlas {

// All Cartesian quantities are in the slope frame: x downhill along the
// ramp, z normal to the ramp surface. The base is parallel to the slope.
struct SimState {
  double t = 0.0;
  double base_x = 0.0;
  double base_v = 0.0;
  double base_height = 0.0;  // hip height above the ramp, held constant
  double pitch = 0.0;        // relative to the slope, held at zero
  PerLeg<JointVector> q{};
  PerLeg<JointRates> qd{};
  PerLeg<JointTorques> tau{};  // torques applied during the last step
  PerLeg<bool> contact{};
  PerLeg<Vec3> grf{};  // ground force acting on each foot
  PerLeg<double> anchor_x{};  // tangential stick anchor of each foot
  double torso_normal = 0.0;
  double torso_friction = 0.0;
  double slip = 0.0;  // cumulative base displacement not credited as progress
  PerLeg<bool> slipping{};
  PerLeg<int> saturated{};

  SimState();
};

// Magnitude bound beyond which a step is declared unstable.
inline constexpr double kBlowupLimit = 1.0e6;

// Joint servo setpoints held between control ticks; the impedance law itself
// is evaluated at every physics step.
struct LegCommand {
  PerLeg<JointReference> refs{};
  ImpedanceGains gains;
  double tau_max = 44.0;
};

// Limb inertia seen by one leg's joints: reflected actuator inertia plus two
// point masses (mid thigh, mid shank).
Mat3 limb_mass_matrix(const LegGeometry& geom, const JointVector& q, double joint_inertia,
                      double thigh_mass, double shank_mass);
JointTorques limb_gravity_torque(const LegGeometry& geom, const JointVector& q,
                                 double thigh_mass, double shank_mass, const Vec3& gravity);

// Ground contact of one foot for the leg rate solve. The ground force on the
// foot is F0 - C (J qd).
struct FootGround {
  Vec3 force0 = Vec3::Zero();
  Mat3 damping = Mat3::Zero();
};

struct LegRateSolution {
  JointRates qd = JointRates::Zero();
  JointTorques tau = JointTorques::Zero();
  int saturated_joints = 0;
};

// Implicit step of one leg: (M/dt + D + J^T C J) qd' = M qd/dt + K e + D qd_des
// + J^T F0 + tau_gravity, where C is the ground damping. Joints whose impedance
// torque would exceed tau_max are held at the limit instead. With M = 0 this is
// the massless-leg balance tau + J^T F_ground = 0.
LegRateSolution solve_leg_rates(const Mat3& jac, const Mat3& mass, const JointVector& q,
                                const JointRates& qd, const JointReference& ref,
                                const ImpedanceGains& gains, double tau_max,
                                const FootGround& ground, const JointTorques& tau_gravity,
                                double dt);

// Torso slider: along-slope base dynamics with Coulomb torso friction and
// penalty foot contacts. By default the legs are massless force transmitters,
// so joint rates follow from K e + D (qd_des - qd) + J^T F_ground = 0 solved
// implicitly each step; RobotSpec::slider_limb_inertia adds the limb mass
// matrix. Throws NumericalBlowup.
SimState step_slider(const SimState& state, const LegCommand& command, const TerrainSpec& terrain,
                     const RobotSpec& robot, const ContactModel& contact, double dt);

struct StanceForces {
  PerLeg<Vec3> grf{};  // ground force on each stance foot (slope frame)
  PerLeg<bool> saturated{};
  int saturated_count = 0;
};

// Quasi-static distribution of the weight over the stance feet: normal loads
// are the minimum-norm solution of the vertical and pitch-moment balance; the
// downhill load is shared equally and capped at mu_s N per foot, with the
// excess moved to unsaturated feet. Throws FrictionConeInfeasible.
StanceForces distribute_stance_forces(const PerLeg<Vec3>& foot_positions,
                                      const PerLeg<bool>& stance, double com_height,
                                      const TerrainSpec& terrain, double mass, double foot_mu_s);

struct WalkerInput {
  WalkingTick tick;
  LegCommand command;  // swing-leg servo setpoints
  double v = 0.0;      // commanded base speed
};

// Quasi-static walker: the base follows the commanded speed, stance joints
// follow the foot references kinematically with torques from J^T F, swing
// legs carry the limb inertia and track their references with the impedance
// law. Saturated feet credit only part of
// the step as progress (accumulated in SimState::slip).
SimState step_walker(const SimState& state, const WalkerInput& input, const TerrainSpec& terrain,
                     const RobotSpec& robot, const ContactModel& contact, double dt);

}  // namespace cot_atlas
