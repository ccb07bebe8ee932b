#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cot_atlas/types.hpp"

namespace cot_atlas {

struct LegSample {
  JointVector q = JointVector::Zero();
  JointRates qd = JointRates::Zero();
  JointTorques tau = JointTorques::Zero();
  Vec3 force = Vec3::Zero();     // force the foot exerts on the ground, hip frame
  Vec3 foot_vel = Vec3::Zero();  // foot velocity relative to the hip, hip frame
  bool contact = false;
  int saturated = 0;  // joints at the torque limit this tick
};

struct LogRow {
  double t = 0.0;
  double cmd_speed = 0.0;
  Vec3 base = Vec3::Zero();  // slope frame
  double slip = 0.0;         // cumulative uncredited displacement
  PerLeg<LegSample> legs{};
};

enum class Provenance { Internal, External };

struct TrialMetadata {
  std::string trial_id = "trial";
  ControlMode mode = ControlMode::Sliding;
  Provenance provenance = Provenance::Internal;
  double alpha_deg = 0.0;
  double mu_s = 0.0;
  double mu_d = 0.0;
  double gravity = 0.0;
  double mass = 0.0;
  double speed = 0.0;  // commanded speed of the trial
  std::uint64_t seed = 0;
};

struct TrialLog {
  TrialMetadata meta;
  std::vector<LogRow> rows;
  // Joint torques and rates are recorded (internal simulation logs).
  bool has_joint_signals = true;
  // cmd_speed carries the commanded speed; otherwise the whole log is active.
  bool has_command = true;
  PerLeg<bool> legs_present{true, true, true, true};

  // Strictly increasing t (uniform when internal), finite values. Throws
  // NonMonotoneTime or SchemaError.
  void validate() const;
  double duration() const { return rows.empty() ? 0.0 : rows.back().t - rows.front().t; }
};

}  // namespace cot_atlas
