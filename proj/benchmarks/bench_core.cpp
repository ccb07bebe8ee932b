#include <benchmark/benchmark.h>

#include "cot_atlas/dynamics.hpp"
#include "cot_atlas/energetics.hpp"
#include "cot_atlas/leg_kinematics.hpp"
#include "cot_atlas/trial.hpp"

using namespace cot_atlas;

namespace {

const JointVector kPose(0.1, 0.4, -1.1);

void BM_ForwardKinematics(benchmark::State& state) {
  const LegGeometry g;
  for (auto _ : state) benchmark::DoNotOptimize(forward_kinematics(g, kPose));
}
BENCHMARK(BM_ForwardKinematics);

void BM_InverseKinematics(benchmark::State& state) {
  const LegGeometry g;
  const FootPoint p = forward_kinematics(g, kPose);
  for (auto _ : state) benchmark::DoNotOptimize(inverse_kinematics(g, p));
}
BENCHMARK(BM_InverseKinematics);

void BM_Jacobian(benchmark::State& state) {
  const LegGeometry g;
  for (auto _ : state) benchmark::DoNotOptimize(jacobian(g, kPose));
}
BENCHMARK(BM_Jacobian);

void BM_SliderStep(benchmark::State& state) {
  const RobotSpec robot;
  const TerrainSpec terrain = TerrainSpec::make(15.0, 0.6);
  SimState s;
  s.base_height = robot.slide_hip_height;
  LegCommand cmd;
  for (Leg leg : kAllLegs) {
    const std::size_t i = index(leg);
    const FootPoint p(0.05, robot.leg(leg).side * 0.083, -0.21);  // front feet pressed in
    s.q[i] = inverse_kinematics(robot.leg(leg), p).q;
    cmd.refs[i].q = s.q[i];
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_slider(s, cmd, terrain, robot, ContactModel{}, 1e-3));
  }
}
BENCHMARK(BM_SliderStep);

void BM_StanceDistribution(benchmark::State& state) {
  const RobotSpec robot;
  PerLeg<Vec3> feet;
  for (Leg leg : kAllLegs) feet[index(leg)] = robot.hip_position(leg) + Vec3(0, 0, -0.32);
  const PerLeg<bool> stance{true, true, true, false};
  const TerrainSpec terrain = TerrainSpec::make(10.0, 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        distribute_stance_forces(feet, stance, robot.walk_height, terrain, robot.mass, 0.7));
  }
}
BENCHMARK(BM_StanceDistribution);

void BM_SlideTrial(benchmark::State& state) {
  TrialConfig c;
  c.terrain = TerrainSpec::make(10.0, 0.6);
  c.jitter = false;
  for (auto _ : state) {
    const TrialLog log = simulate_trial(c);
    benchmark::DoNotOptimize(cot_for_trial(log, c.robot, c.terrain).cot);
  }
}
BENCHMARK(BM_SlideTrial)->Unit(benchmark::kMillisecond);

void BM_WalkTrial(benchmark::State& state) {
  TrialConfig c;
  c.mode = ControlMode::Walking;
  c.terrain = TerrainSpec::make(10.0, 0.7);
  c.walk_speed = 0.2;
  c.jitter = false;
  for (auto _ : state) {
    const TrialLog log = simulate_trial(c);
    benchmark::DoNotOptimize(cot_for_trial(log, c.robot, c.terrain).cot);
  }
}
BENCHMARK(BM_WalkTrial)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
