#include "cot_atlas/trial.hpp"

#include <cmath>

#include "cot_atlas/error.hpp"
#include "cot_atlas/seeding.hpp"

namespace cot_atlas {

void TrialConfig::validate(bool allow_extended) const {
  robot.validate();
  terrain.validate(allow_extended);
  contact.validate();
  slide.validate();
  gains.validate();
  gait.validate();
  const bool ok = tau_max > 0.0 && walk_speed >= 0.0 && ramp_length > 0.0 && timeout > 0.0 &&
                  settle_time >= 0.0 && physics_dt > 0.0 && physics_dt <= 2.0e-3 &&
                  jitter_position >= 0.0 && jitter_phase >= 0.0;
  if (!ok) throw Error(ErrorKind::InvariantViolation, "invalid trial settings");
  const double ratio = 1.0 / (slide.f_s * physics_dt);
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1.0) {
    throw Error(ErrorKind::InvariantViolation,
                "control period must be an integer multiple of the physics step");
  }
}

TrialJitter draw_jitter(const TrialConfig& config) {
  if (!config.jitter) return {};
  SplitMixStream rng(config.seed);
  TrialJitter j;
  j.base_offset = rng.symmetric(config.jitter_position);
  j.phase_cycles = rng.symmetric(config.jitter_phase);
  return j;
}

namespace {

TrialMetadata make_metadata(const TrialConfig& c) {
  TrialMetadata m;
  m.trial_id = c.trial_id;
  m.mode = c.mode;
  m.provenance = Provenance::Internal;
  m.alpha_deg = c.terrain.alpha_deg;
  m.mu_s = c.terrain.mu_s;
  m.mu_d = c.terrain.mu_d;
  m.gravity = c.terrain.g;
  m.mass = c.robot.mass;
  m.speed = c.commanded_speed();
  m.seed = c.seed;
  return m;
}

LogRow make_row(const SimState& s, const RobotSpec& robot, double cmd_speed) {
  LogRow row;
  row.t = s.t;
  row.cmd_speed = cmd_speed;
  row.base = Vec3(s.base_x, 0.0, s.base_height);
  row.slip = s.slip;
  for (Leg leg : kAllLegs) {
    const std::size_t i = index(leg);
    auto& ls = row.legs[i];
    ls.q = s.q[i];
    ls.qd = s.qd[i];
    ls.tau = s.tau[i];
    ls.force = -s.grf[i];
    ls.foot_vel = jacobian(robot.leg(leg), s.q[i]) * s.qd[i];
    ls.contact = s.contact[i];
    ls.saturated = s.saturated[i];
  }
  return row;
}

struct LoopClock {
  int substeps;
  double control_dt;
  std::int64_t settle_ticks;
  std::int64_t timeout_ticks;
};

LoopClock make_clock(const TrialConfig& c) {
  LoopClock clock;
  clock.substeps = static_cast<int>(std::lround(1.0 / (c.slide.f_s * c.physics_dt)));
  clock.control_dt = clock.substeps * c.physics_dt;
  clock.settle_ticks = std::llround(c.settle_time / clock.control_dt);
  clock.timeout_ticks = std::llround(c.timeout / clock.control_dt);
  return clock;
}

[[noreturn]] void timeout(const TrialConfig& c, double covered) {
  throw Error(ErrorKind::Timeout, c.trial_id + ": covered " + std::to_string(covered) + " of " +
                                      std::to_string(c.ramp_length) + " m before the time limit");
}

LegCommand make_command(const TrialConfig& c) {
  LegCommand cmd;
  cmd.gains = c.gains;
  cmd.tau_max = c.tau_max;
  return cmd;
}

TrialLog simulate_slide(const TrialConfig& c, const TrialJitter& jitter) {
  const RobotSpec& robot = c.robot;
  const LoopClock clock = make_clock(c);
  const double phase_offset = 2.0 * kPi * jitter.phase_cycles;

  const HomePose home_input = robot.slide_home;
  HomePose home = home_input;

  // The robot settles holding the first active foot targets at rest, so the
  // stroke starts without a reference jump.
  PerLeg<FootReference> start = foot_reference(c.slide, 0, home, phase_offset);
  for (auto& r : start) r.velocity.setZero();

  SimState state;
  state.base_x = jitter.base_offset;
  state.base_height = robot.slide_hip_height;
  for (Leg leg : kAllLegs) {
    state.q[index(leg)] = inverse_kinematics(robot.leg(leg), start[index(leg)].position).q;
  }
  const double start_x = state.base_x;

  TrialLog log;
  log.meta = make_metadata(c);
  LegCommand command = make_command(c);

  for (std::int64_t tick = 0;; ++tick) {
    const bool active = tick >= clock.settle_ticks;
    const std::int64_t k = tick - clock.settle_ticks;
    if (active && k > clock.timeout_ticks) timeout(c, state.base_x - start_x);

    const auto refs = active ? foot_reference(c.slide, k, home, phase_offset) : start;
    if (active) home = smooth_home(home, home_input, c.slide.alpha_filter);
    for (Leg leg : kAllLegs) {
      command.refs[index(leg)] = joint_reference(robot.leg(leg), refs[index(leg)]);
    }

    for (int s = 0; s < clock.substeps; ++s) {
      state = step_slider(state, command, c.terrain, robot, c.contact, c.physics_dt);
    }

    log.rows.push_back(make_row(state, robot, active ? c.slide.v : 0.0));
    if (active && state.base_x - start_x >= c.ramp_length) break;
  }
  return log;
}

TrialLog simulate_walk(const TrialConfig& c, const TrialJitter& jitter) {
  const RobotSpec& robot = c.robot;
  const LoopClock clock = make_clock(c);

  WalkHome home;
  for (Leg leg : kAllLegs) {
    home.feet[index(leg)] = FootPoint(0.0, robot.leg(leg).side * robot.leg(leg).hip_offset,
                                      -robot.walk_height);
  }

  SimState state;
  state.base_x = jitter.base_offset;
  state.base_height = robot.walk_height;
  const WalkingTick start_tick = walking_tick(c.gait, home, c.walk_speed, 0.0, jitter.phase_cycles);
  for (Leg leg : kAllLegs) {
    state.q[index(leg)] =
        inverse_kinematics(robot.leg(leg), start_tick.refs[index(leg)].position).q;
  }
  const double start_x = state.base_x;

  TrialLog log;
  log.meta = make_metadata(c);

  for (std::int64_t tick = 0;; ++tick) {
    const bool active = tick >= clock.settle_ticks;
    const std::int64_t k = tick - clock.settle_ticks;
    if (active && k > clock.timeout_ticks) timeout(c, state.base_x - start_x - state.slip);

    WalkerInput input;
    if (active) {
      input.v = c.walk_speed;
      input.tick = walking_tick(c.gait, home, c.walk_speed, static_cast<double>(k) * clock.control_dt,
                                jitter.phase_cycles);
    } else {
      input.tick = start_tick;
      for (auto& r : input.tick.refs) r.velocity.setZero();
    }

    input.command = make_command(c);
    for (Leg leg : kAllLegs) {
      const std::size_t i = index(leg);
      if (!input.tick.stance[i]) {
        input.command.refs[i] = joint_reference(robot.leg(leg), input.tick.refs[i]);
      }
    }

    // Stance torques depend on this tick's force distribution, so the physics
    // step runs before the row is recorded.
    for (int s = 0; s < clock.substeps; ++s) {
      state = step_walker(state, input, c.terrain, robot, c.contact, c.physics_dt);
    }

    log.rows.push_back(make_row(state, robot, active ? c.walk_speed : 0.0));

    if (active && state.base_x - start_x >= c.ramp_length) break;
  }
  return log;
}

}  // namespace

TrialLog simulate_trial(const TrialConfig& config) {
  config.validate(true);
  const TrialJitter jitter = draw_jitter(config);
  TrialLog log = config.mode == ControlMode::Sliding ? simulate_slide(config, jitter)
                                                     : simulate_walk(config, jitter);
  return log;
}

}  // namespace cot_atlas
