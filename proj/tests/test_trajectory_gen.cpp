#include <cmath>

#include <gtest/gtest.h>

#include "cot_atlas/error.hpp"
#include "cot_atlas/trajectory_gen.hpp"

using namespace cot_atlas;

TEST(Phase, StartsAtZero) {
  const Phase p = phase(SlideTrajParams{}, 0);
  EXPECT_EQ(p.phi, 0.0);
  EXPECT_EQ(p.s, 0.0);
  EXPECT_EQ(p.c, 1.0);
}

TEST(Phase, QuarterPeriod) {
  SlideTrajParams params;
  params.f = 1.0;
  params.f_s = 4.0;
  const Phase p = phase(params, 1);
  EXPECT_DOUBLE_EQ(p.phi, kPi / 2);
  EXPECT_NEAR(p.s, 1.0, 1e-15);
  EXPECT_NEAR(p.c, 0.0, 1e-15);
}

TEST(Phase, FullPeriod) {
  SlideTrajParams params;
  params.f = 2.0;
  params.f_s = 500.0;
  const Phase p = phase(params, 250);
  EXPECT_NEAR(p.s, 0.0, 1e-12);
  EXPECT_NEAR(p.c, 1.0, 1e-12);
}

TEST(FrontSwing, StartOfStroke) {
  SlideTrajParams params;
  params.v = 0.3;
  const Vec3 s = front_swing(params, 0);
  EXPECT_EQ(s.x(), 0.0);
  EXPECT_EQ(s.y(), 0.0);
  EXPECT_DOUBLE_EQ(s.z(), -params.z0 + params.v * params.h_swing);
}

TEST(FrontSwing, AsymmetricBranches) {
  SlideTrajParams params;
  params.f = 1.0;
  params.f_s = 4.0;
  params.v = 0.2;
  EXPECT_NEAR(front_swing(params, 1).x(), 0.01, 1e-15);   // s = +1, L+ = 0.05
  EXPECT_NEAR(front_swing(params, 3).x(), -0.03, 1e-15);  // s = -1, L_swing = 0.15
}

TEST(FrontSwing, ZeroSpeedHolds) {
  SlideTrajParams params;
  params.v = 0.0;
  for (int k : {0, 17, 333, 1000}) {
    EXPECT_EQ(front_swing(params, k), Vec3(0.0, 0.0, -params.z0));
    EXPECT_EQ(front_swing_velocity(params, k), Vec3::Zero());
  }
}

TEST(FrontSwing, VelocityMatchesDifference) {
  SlideTrajParams params;
  params.f_s = 1e5;
  params.v = 1.0;
  const double dt = 1.0 / params.f_s;
  for (int k : {1000, 12345, 40000, 60001}) {
    const Vec3 fd = (front_swing(params, k + 1) - front_swing(params, k - 1)) / (2 * dt);
    EXPECT_LE((front_swing_velocity(params, k) - fd).norm(), 1e-3);
  }
}

TEST(FrontSwing, PureFunction) {
  SlideTrajParams params;
  for (int k = 0; k < 500; k += 7) {
    const Vec3 a = front_swing(params, k, 0.3);
    const Vec3 b = front_swing(params, k, 0.3);
    EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * 3), 0);
  }
}

TEST(FootReference, ComposesHomeAndSwing) {
  SlideTrajParams params;
  params.v = 0.1;
  HomePose home = default_slide_home();
  home[index(Leg::LF)] = FootPoint(0.28, 0.083, -0.10);
  const auto refs = foot_reference(params, 0, home);
  const FootPoint p = refs[index(Leg::LF)].position;
  EXPECT_NEAR(p.x(), 0.28, 1e-15);
  EXPECT_NEAR(p.y(), 0.083, 1e-15);
  EXPECT_NEAR(p.z(), -0.144, 1e-15);
  // hind feet stay home
  EXPECT_EQ(refs[index(Leg::LH)].position, home[index(Leg::LH)]);
  EXPECT_EQ(refs[index(Leg::RH)].velocity, Vec3::Zero());
}

TEST(FootReference, ZeroSpeedConstant) {
  SlideTrajParams params;
  params.v = 0.0;
  const HomePose home = default_slide_home();
  for (int k : {0, 99, 1234}) {
    const auto refs = foot_reference(params, k, home);
    EXPECT_EQ(refs[index(Leg::RF)].position, home[index(Leg::RF)] + Vec3(0, 0, -params.z0));
  }
}

TEST(SmoothHome, FixedPoint) {
  const HomePose h = default_slide_home();
  EXPECT_EQ(smooth_home(h, h, 0.05), h);
}

TEST(SmoothHome, GeometricApproach) {
  HomePose zero{}, one{};
  for (auto& p : zero) p.setZero();
  for (auto& p : one) p.setOnes();
  HomePose h = smooth_home(zero, one, 0.5);
  EXPECT_DOUBLE_EQ(h[0].x(), 0.5);
  h = smooth_home(h, one, 0.5);
  EXPECT_DOUBLE_EQ(h[0].x(), 0.75);
  h = smooth_home(h, one, 0.5);
  EXPECT_DOUBLE_EQ(h[0].x(), 0.875);
}

TEST(SlideTrajParams, RejectsUndersampledServo) {
  SlideTrajParams params;
  params.f_s = 10.0;
  EXPECT_THROW(params.validate(), Error);
  params = {};
  params.l_plus = 0.2;  // longer than the swing
  EXPECT_THROW(params.validate(), Error);
  EXPECT_NO_THROW(SlideTrajParams{}.validate());
}

TEST(JointReference, TracksFootReference) {
  const LegGeometry g;
  FootReference ref;
  ref.position = FootPoint(0.1, 0.083, -0.3);
  ref.velocity = Vec3(0.2, 0.0, -0.1);
  const JointReference j = joint_reference(g, ref);
  EXPECT_LE((forward_kinematics(g, j.q) - ref.position).norm(), 1e-9);
  EXPECT_LE((jacobian(g, j.q) * j.qd - ref.velocity).norm(), 1e-9);
}
