#pragma once

#include <cstdint>
#include <string>

#include "cot_atlas/controllers.hpp"
#include "cot_atlas/dynamics.hpp"
#include "cot_atlas/terrain.hpp"
#include "cot_atlas/trajectory_gen.hpp"
#include "cot_atlas/trial_log.hpp"

namespace cot_atlas {

struct TrialConfig {
  std::string trial_id = "trial";
  ControlMode mode = ControlMode::Sliding;
  RobotSpec robot;
  TerrainSpec terrain;
  ContactModel contact;
  SlideTrajParams slide;
  ImpedanceGains gains;
  double tau_max = 44.0;
  GaitSchedule gait;
  double walk_speed = 0.1;
  double ramp_length = 3.0;
  double timeout = 120.0;  // simulated seconds of active locomotion
  double settle_time = 0.2;
  double physics_dt = 1.0e-3;
  std::uint64_t seed = 0;
  bool jitter = true;
  double jitter_position = 0.01;  // +- m, initial base position
  double jitter_phase = 0.1;      // +- cycles, initial gait phase

  void validate(bool allow_extended = false) const;
  double commanded_speed() const { return mode == ControlMode::Walking ? walk_speed : slide.v; }
};

struct TrialJitter {
  double base_offset = 0.0;
  double phase_cycles = 0.0;
};

// Deterministic draw from the trial seed; zero when jitter is disabled.
TrialJitter draw_jitter(const TrialConfig& config);

// Runs one trial from a fresh initial pose until the ramp length is covered.
// Throws Timeout, NumericalBlowup, FrictionConeInfeasible, Unreachable.
TrialLog simulate_trial(const TrialConfig& config);

}  // namespace cot_atlas
