#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "cot_atlas/terrain.hpp"
#include "cot_atlas/trial_log.hpp"
#include "cot_atlas/types.hpp"

namespace cot_atlas {

inline constexpr double kMinDistance = 1.0e-3;         // m
inline constexpr double kActiveSpeedThreshold = 1.0e-4;  // m/s
inline constexpr double kMaxSingularFraction = 0.01;

enum class SignalPath { Joint, Cartesian };
enum class JointSelection { All, Active };

// Per-row joint torques and rates for all legs.
struct JointSeries {
  std::vector<double> t;
  std::vector<std::array<double, kNumJoints>> tau;
  std::vector<std::array<double, kNumJoints>> qd;
  std::vector<bool> excluded;  // rows dropped as near-singular
  std::size_t singular_rows = 0;
};

struct EnergyResult {
  double total = 0.0;
  std::array<double, kNumJoints> per_joint{};
};

// Trapezoidal integral of sum_i |tau_i qd_i| over the samples in [t0, tf].
// Throws WindowOutOfRange.
EnergyResult mechanical_energy(const JointSeries& series, double t0, double tf,
                               const std::array<bool, kNumJoints>& joints);
EnergyResult mechanical_energy(const TrialLog& log, double t0, double tf);

// E / (m g d). Throws ZeroDistance when d <= 1 mm.
double cost_of_transport(double energy, double mass, double g, double distance);

// Joint series straight from the log.
JointSeries joint_signals(const TrialLog& log, std::size_t first, std::size_t last);

// tau = J^T F_f + tau_free and qd = J^-1 xd_f from the Cartesian columns.
// Rows with |det J| <= 1e-8 on any present leg are excluded; more than 1% of
// the window excluded throws TooManySingularRows.
JointSeries reconstruct_joint_signals(const TrialLog& log, const RobotSpec& robot,
                                      const TerrainSpec& terrain, std::size_t first,
                                      std::size_t last, bool tau_free = false);

// Joint torque needed to hold and accelerate two point masses per leg (mid
// thigh, mid shank) under gravity, given joint accelerations.
JointTorques limb_free_torque(const LegGeometry& geom, const JointVector& q,
                              const JointVector& qdd, double thigh_mass, double shank_mass,
                              const Vec3& gravity_hip_frame);

struct ActiveWindow {
  std::size_t first = 0;
  std::size_t last = 0;
};

// First to last row with commanded speed above threshold; the whole log when
// there is no command column. Throws WindowOutOfRange.
ActiveWindow active_window(const TrialLog& log);

// Integrated base path length in the slope plane minus the slip over the window.
double travelled_distance(const TrialLog& log, std::size_t first, std::size_t last);

struct CoTOptions {
  SignalPath path = SignalPath::Joint;
  JointSelection joints = JointSelection::All;
  bool tau_free = false;
};

struct CoTResult {
  double energy = 0.0;
  double distance = 0.0;
  double cot = 0.0;
  ControlMode mode = ControlMode::Sliding;
  double alpha_deg = 0.0;
  double mu_s = 0.0;
  double speed = 0.0;
  SignalPath path = SignalPath::Joint;
  Provenance provenance = Provenance::Internal;
  std::size_t singular_rows = 0;
  std::array<double, kNumJoints> per_joint{};
};

CoTResult cot_for_trial(const TrialLog& log, const RobotSpec& robot, const TerrainSpec& terrain,
                        const CoTOptions& options = {});

std::array<bool, kNumJoints> joint_mask(ControlMode mode, JointSelection selection,
                                        const PerLeg<bool>& legs_present);

}  // namespace cot_atlas
