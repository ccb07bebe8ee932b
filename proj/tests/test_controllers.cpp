#include <optional>
#include <random>

#include <gtest/gtest.h>

#include "cot_atlas/controllers.hpp"
#include "cot_atlas/energetics.hpp"
#include "cot_atlas/error.hpp"
#include "cot_atlas/trial.hpp"

using namespace cot_atlas;

namespace {

WalkHome zero_home() {
  WalkHome h;
  for (auto& f : h.feet) f.setZero();
  return h;
}

}  // namespace

TEST(Impedance, ZeroErrorZeroTorque) {
  const JointVector q(0.1, -0.4, -1.1);
  const JointRates qd(0.3, 0.2, -0.5);
  EXPECT_EQ(impedance_torque(ImpedanceGains{}, q, qd, q, qd), JointTorques::Zero());
}

TEST(Impedance, LinearLaw) {
  ImpedanceGains gains;
  gains.k_q = Vec3::Constant(100.0);
  const JointTorques tau = impedance_torque(gains, JointVector(0.1, 0, 0), JointRates::Zero(),
                                            JointVector::Zero(), JointRates::Zero());
  EXPECT_NEAR(tau[0], 10.0, 1e-12);
  EXPECT_EQ(tau[1], 0.0);
  EXPECT_EQ(tau[2], 0.0);
}

TEST(Impedance, ElementwiseOracle) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0), k(10.0, 300.0), d(0.5, 20.0);
  for (int i = 0; i < 1000; ++i) {
    ImpedanceGains g;
    g.k_q = Vec3(k(rng), k(rng), k(rng));
    g.d_q = Vec3(d(rng), d(rng), d(rng));
    const JointVector qdes(u(rng), u(rng), u(rng)), q(u(rng), u(rng), u(rng));
    const JointRates qddes(u(rng), u(rng), u(rng)), qd(u(rng), u(rng), u(rng));
    const JointTorques tau = impedance_torque(g, qdes, qddes, q, qd);
    for (int j = 0; j < 3; ++j) {
      const double ref = g.k_q[j] * (qdes[j] - q[j]) + g.d_q[j] * (qddes[j] - qd[j]);
      EXPECT_NEAR(tau[j], ref, 1e-12);
    }
  }
}

TEST(Impedance, RejectsNonPositiveGains) {
  ImpedanceGains g;
  g.d_q[1] = 0.0;
  EXPECT_THROW(g.validate(), Error);
}

TEST(Saturation, ClampsAndCounts) {
  const SaturatedTorque s = saturate(JointTorques(50.0, -10.0, -60.0), 44.0);
  EXPECT_EQ(s.tau, JointTorques(44.0, -10.0, -44.0));
  EXPECT_EQ(s.saturated_joints, 2);
}

TEST(Crawl, AlwaysThreeOrFourInStance) {
  const GaitSchedule gait;
  const WalkHome home = zero_home();
  for (double v : {0.05, 0.1, 0.2, 0.3}) {
    for (double t = 0.0; t < 10.0; t += 0.0037) {
      const int n = walking_tick(gait, home, v, t).stance_count();
      EXPECT_GE(n, 3);
      EXPECT_LE(n, 4);
    }
  }
}

TEST(Crawl, ZeroSpeedHoldsFeet) {
  WalkHome home;
  for (Leg leg : kAllLegs) home.feet[index(leg)] = FootPoint(0.01 * index(leg), 0.08, -0.3);
  for (double t : {0.0, 0.7, 3.1}) {
    const WalkingTick tick = walking_tick(GaitSchedule{}, home, 0.0, t);
    EXPECT_EQ(tick.stance_count(), 4);
    for (Leg leg : kAllLegs) {
      EXPECT_EQ(tick.refs[index(leg)].position, home.feet[index(leg)]);
      EXPECT_EQ(tick.refs[index(leg)].velocity, Vec3::Zero());
    }
  }
}

TEST(Crawl, ScheduleRejectsLowDutyFactor) {
  GaitSchedule g;
  g.duty_factor = 0.7;
  EXPECT_THROW(g.validate(), Error);
  EXPECT_NO_THROW(GaitSchedule{}.validate());
}

TEST(Crawl, StanceFeetMoveBackwardAtCommandedSpeed) {
  const GaitSchedule gait;
  const WalkHome home = zero_home();
  const double v = 0.2;
  const WalkingTick tick = walking_tick(gait, home, v, 0.4);
  for (Leg leg : kAllLegs) {
    if (tick.stance[index(leg)]) {
      EXPECT_NEAR(tick.refs[index(leg)].velocity.x(), -v, 1e-12);
    }
  }
}

TEST(Crawl, RealizedSpeedOnFlatGround) {
  TrialConfig c;
  c.mode = ControlMode::Walking;
  c.walk_speed = 0.1;
  c.terrain = TerrainSpec::make(0.0, 0.7);
  c.jitter = false;
  c.ramp_length = 0.1 * 3.0 * c.gait.period(0.1);  // three gait cycles
  const TrialLog log = simulate_trial(c);
  const ActiveWindow w = active_window(log);
  const double d = travelled_distance(log, w.first, w.last);
  const double t = log.rows[w.last].t - log.rows[w.first].t;
  EXPECT_NEAR(d / t, 0.1, 0.01);
}

TEST(ControllerSwitch, SelectsActiveController) {
  const std::optional<JointTorques> walk = JointTorques(1, 2, 3);
  const std::optional<JointTorques> slide = JointTorques(4, 5, 6);
  EXPECT_EQ(controller_switch(ControlMode::Sliding, walk, slide), *slide);
  EXPECT_EQ(controller_switch(ControlMode::Walking, walk, slide), *walk);
}

TEST(ControllerSwitch, InactiveOutputNotNeeded) {
  const std::optional<JointTorques> slide = JointTorques(4, 5, 6);
  EXPECT_EQ(controller_switch<JointTorques>(ControlMode::Sliding, std::nullopt, slide), *slide);
  EXPECT_THROW(controller_switch<JointTorques>(ControlMode::Walking, std::nullopt, slide),
               std::bad_optional_access);
}

TEST(ControllerSwitch, ToggleChangesOutputAtOneTickWithoutBlending) {
  const JointTorques walk(1, 1, 1), slide(-2, 0, 5);
  std::vector<JointTorques> out;
  for (int k = 0; k < 100; ++k) {
    const ControlMode m = k < 37 ? ControlMode::Walking : ControlMode::Sliding;
    out.push_back(controller_switch(m, std::optional(walk), std::optional(slide)));
  }
  int changes = 0;
  for (std::size_t k = 1; k < out.size(); ++k) {
    if (out[k] != out[k - 1]) ++changes;
    EXPECT_TRUE(out[k] == walk || out[k] == slide);
  }
  EXPECT_EQ(changes, 1);
  EXPECT_EQ(out[36], walk);
  EXPECT_EQ(out[37], slide);
}
