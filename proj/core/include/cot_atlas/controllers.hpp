#pragma once

#include <optional>

#include "cot_atlas/trajectory_gen.hpp"
#include "cot_atlas/types.hpp"

namespace cot_atlas {

struct ImpedanceGains {
  Vec3 k_q = Vec3::Constant(100.0);  // N m / rad
  Vec3 d_q = Vec3::Constant(5.0);    // N m s / rad

  void validate() const;
};

// K (q_des - q) + D (qd_des - qd), unsaturated.
JointTorques impedance_torque(const ImpedanceGains& gains, const JointVector& q_des,
                              const JointRates& qd_des, const JointVector& q,
                              const JointRates& qd);

struct SaturatedTorque {
  JointTorques tau = JointTorques::Zero();
  int saturated_joints = 0;
};

SaturatedTorque saturate(const JointTorques& tau, double tau_max);

enum class GaitType { Crawl };

// Quasi-static crawl used in place of a model-predictive walking controller.
struct GaitSchedule {
  GaitType type = GaitType::Crawl;
  double duty_factor = 0.8;
  double step_length = 0.12;  // hip-relative stance sweep, m
  double step_height = 0.06;
  double cycle_time = 2.0;  // upper bound on the gait period, s

  void validate() const;
  // Gait period at commanded speed v (> 0).
  double period(double v) const;
};

// Crawl phase offsets in units of the cycle, footfall order LH, LF, RH, RF.
double crawl_offset(Leg leg);

struct WalkingTick {
  PerLeg<FootReference> refs;  // hip frame
  PerLeg<bool> stance{};
  int stance_count() const;
};

struct WalkHome {
  PerLeg<FootPoint> feet;
};

// Foot references and stance set of the crawl at time t since gait start.
// phase_offset is in cycles.
WalkingTick walking_tick(const GaitSchedule& schedule, const WalkHome& home, double v, double t,
                         double phase_offset = 0.0);

template <typename Torques>
Torques controller_switch(ControlMode mode, const std::optional<Torques>& walk_out,
                          const std::optional<Torques>& slide_out) {
  const auto& active = mode == ControlMode::Walking ? walk_out : slide_out;
  return active.value();
}

}  // namespace cot_atlas
