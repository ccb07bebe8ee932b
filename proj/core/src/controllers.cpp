#include "cot_atlas/controllers.hpp"

#include <algorithm>
#include <cmath>

#include "cot_atlas/error.hpp"

namespace cot_atlas {

void ImpedanceGains::validate() const {
  if (!((k_q.array() > 0.0).all() && (d_q.array() > 0.0).all())) {
    throw Error(ErrorKind::InvariantViolation, "impedance gains must be positive");
  }
}

JointTorques impedance_torque(const ImpedanceGains& gains, const JointVector& q_des,
                              const JointRates& qd_des, const JointVector& q,
                              const JointRates& qd) {
  return gains.k_q.cwiseProduct(q_des - q) + gains.d_q.cwiseProduct(qd_des - qd);
}

SaturatedTorque saturate(const JointTorques& tau, double tau_max) {
  SaturatedTorque out;
  for (int i = 0; i < 3; ++i) {
    const double clamped = std::clamp(tau[i], -tau_max, tau_max);
    if (clamped != tau[i]) ++out.saturated_joints;
    out.tau[i] = clamped;
  }
  return out;
}

void GaitSchedule::validate() const {
  const bool ok = duty_factor > 0.5 && duty_factor < 1.0 && duty_factor * 4.0 >= 3.0 &&
                  step_length > 0.0 && step_height >= 0.0 && cycle_time > 0.0;
  if (!ok) throw Error(ErrorKind::InvariantViolation, "invalid crawl gait schedule");
}

double GaitSchedule::period(double v) const {
  return std::min(cycle_time, step_length / (v * duty_factor));
}

double crawl_offset(Leg leg) {
  switch (leg) {
    case Leg::LH: return 0.0;
    case Leg::LF: return 0.25;
    case Leg::RH: return 0.5;
    case Leg::RF: return 0.75;
  }
  return 0.0;
}

int WalkingTick::stance_count() const {
  return static_cast<int>(std::count(stance.begin(), stance.end(), true));
}

WalkingTick walking_tick(const GaitSchedule& schedule, const WalkHome& home, double v, double t,
                         double phase_offset) {
  WalkingTick tick;
  for (Leg leg : kAllLegs) {
    auto& ref = tick.refs[index(leg)];
    ref.position = home.feet[index(leg)];
    tick.stance[index(leg)] = true;
  }
  if (v <= 0.0) return tick;

  const double period = schedule.period(v);
  const double beta = schedule.duty_factor;
  const double sweep = v * beta * period;  // equals step_length unless period hit cycle_time
  const double stance_speed = sweep / (beta * period);
  const double swing_time = (1.0 - beta) * period;

  for (Leg leg : kAllLegs) {
    auto& ref = tick.refs[index(leg)];
    double ph = t / period + crawl_offset(leg) + phase_offset;
    ph -= std::floor(ph);
    if (ph < beta) {
      const double sigma = ph / beta;
      ref.position.x() += 0.5 * sweep - sweep * sigma;
      ref.velocity = Vec3(-stance_speed, 0.0, 0.0);
    } else {
      tick.stance[index(leg)] = false;
      const double sigma = (ph - beta) / (1.0 - beta);
      const double two_pi_sigma = 2.0 * kPi * sigma;
      // Cycloid in x (zero end velocities), half-sine lift in z.
      ref.position.x() += -0.5 * sweep + sweep * (sigma - std::sin(two_pi_sigma) / (2.0 * kPi));
      ref.position.z() += schedule.step_height * std::sin(kPi * sigma);
      const double dsigma = 1.0 / swing_time;
      ref.velocity = Vec3(sweep * (1.0 - std::cos(two_pi_sigma)) * dsigma, 0.0,
                          schedule.step_height * kPi * std::cos(kPi * sigma) * dsigma);
    }
  }
  return tick;
}

}  // namespace cot_atlas
