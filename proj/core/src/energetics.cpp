#include "cot_atlas/energetics.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "cot_atlas/error.hpp"
#include "cot_atlas/leg_kinematics.hpp"

namespace cot_atlas {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      c_ += (sum_ - t) + x;
    } else {
      c_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

bool uniform_steps(const std::vector<double>& t, std::size_t i0, std::size_t i1) {
  if (i1 <= i0 + 1) return true;
  const double mean = (t[i1] - t[i0]) / static_cast<double>(i1 - i0);
  for (std::size_t i = i0; i < i1; ++i) {
    if (std::abs((t[i + 1] - t[i]) - mean) > 1e-9 * mean) return false;
  }
  return true;
}

}  // namespace

EnergyResult mechanical_energy(const JointSeries& s, double t0, double tf,
                               const std::array<bool, kNumJoints>& joints) {
  const double tol = 1e-9;
  if (s.t.empty() || !(t0 < tf) || t0 < s.t.front() - tol || tf > s.t.back() + tol) {
    throw Error(ErrorKind::WindowOutOfRange, "energy window outside the log span");
  }
  std::size_t i0 = 0;
  while (i0 < s.t.size() && s.t[i0] < t0 - tol) ++i0;
  std::size_t i1 = s.t.size() - 1;
  while (i1 > 0 && s.t[i1] > tf + tol) --i1;
  if (i0 >= i1) throw Error(ErrorKind::WindowOutOfRange, "energy window holds fewer than two samples");

  auto power = [&](std::size_t row, std::size_t j) {
    return s.excluded.empty() || !s.excluded[row] ? std::abs(s.tau[row][j] * s.qd[row][j]) : 0.0;
  };

  EnergyResult out;
  const bool uniform = uniform_steps(s.t, i0, i1);
  const double dt = (s.t[i1] - s.t[i0]) / static_cast<double>(i1 - i0);
  CompensatedSum total;
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    if (!joints[j]) continue;
    CompensatedSum acc;
    if (uniform) {
      for (std::size_t i = i0; i <= i1; ++i) acc.add(power(i, j));
      acc.add(-0.5 * (power(i0, j) + power(i1, j)));
      out.per_joint[j] = dt * acc.value();
    } else {
      for (std::size_t i = i0; i < i1; ++i) {
        acc.add(0.5 * (power(i, j) + power(i + 1, j)) * (s.t[i + 1] - s.t[i]));
      }
      out.per_joint[j] = acc.value();
    }
    total.add(out.per_joint[j]);
  }
  out.total = total.value();
  return out;
}

EnergyResult mechanical_energy(const TrialLog& log, double t0, double tf) {
  if (log.rows.empty()) throw Error(ErrorKind::WindowOutOfRange, "empty log");
  const JointSeries s = joint_signals(log, 0, log.rows.size() - 1);
  return mechanical_energy(s, t0, tf, joint_mask(log.meta.mode, JointSelection::All, log.legs_present));
}

double cost_of_transport(double energy, double mass, double g, double distance) {
  if (!(mass > 0.0) || !(g > 0.0)) {
    throw Error(ErrorKind::InvariantViolation, "cost of transport needs mass > 0 and g > 0");
  }
  if (!(distance > kMinDistance)) {
    throw Error(ErrorKind::ZeroDistance,
                "distance " + std::to_string(distance) + " m is below the 1 mm minimum");
  }
  return energy / (mass * g * distance);
}

JointSeries joint_signals(const TrialLog& log, std::size_t first, std::size_t last) {
  if (!log.has_joint_signals) {
    throw Error(ErrorKind::SchemaError, "log carries no joint torques or rates");
  }
  JointSeries s;
  const std::size_t n = last - first + 1;
  s.t.reserve(n);
  s.tau.reserve(n);
  s.qd.reserve(n);
  for (std::size_t r = first; r <= last; ++r) {
    const LogRow& row = log.rows[r];
    s.t.push_back(row.t);
    std::array<double, kNumJoints> tau{}, qd{};
    for (std::size_t l = 0; l < kNumLegs; ++l) {
      for (std::size_t j = 0; j < kJointsPerLeg; ++j) {
        tau[l * kJointsPerLeg + j] = row.legs[l].tau[j];
        qd[l * kJointsPerLeg + j] = row.legs[l].qd[j];
      }
    }
    s.tau.push_back(tau);
    s.qd.push_back(qd);
  }
  return s;
}

JointTorques limb_free_torque(const LegGeometry& geom, const JointVector& q,
                              const JointVector& qdd, double thigh_mass, double shank_mass,
                              const Vec3& gravity) {
  LegGeometry mid_thigh = geom;
  mid_thigh.l_thigh = 0.5 * geom.l_thigh;
  mid_thigh.l_shank = 0.0;
  LegGeometry mid_shank = geom;
  mid_shank.l_shank = 0.5 * geom.l_shank;

  const Mat3 j_thigh = jacobian(mid_thigh, q);
  const Mat3 j_shank = jacobian(mid_shank, q);
  // Velocity-product terms are neglected.
  return j_thigh.transpose() * (thigh_mass * (j_thigh * qdd - gravity)) +
         j_shank.transpose() * (shank_mass * (j_shank * qdd - gravity));
}

JointSeries reconstruct_joint_signals(const TrialLog& log, const RobotSpec& robot,
                                      const TerrainSpec& terrain, std::size_t first,
                                      std::size_t last, bool tau_free) {
  JointSeries s;
  const std::size_t n = last - first + 1;
  s.t.resize(n);
  s.tau.assign(n, {});
  s.qd.assign(n, {});
  s.excluded.assign(n, false);

  for (std::size_t k = 0; k < n; ++k) {
    const LogRow& row = log.rows[first + k];
    s.t[k] = row.t;
    for (Leg leg : kAllLegs) {
      const std::size_t l = index(leg);
      if (!log.legs_present[l]) continue;
      const LegSample& ls = row.legs[l];
      const Mat3 J = jacobian(robot.leg(leg), ls.q);
      if (std::abs(J.determinant()) <= kSingularDetTolerance) {
        s.excluded[k] = true;
        continue;
      }
      const JointTorques tau = J.transpose() * ls.force;
      const JointRates qd = J.partialPivLu().solve(ls.foot_vel);
      for (std::size_t j = 0; j < kJointsPerLeg; ++j) {
        s.tau[k][l * kJointsPerLeg + j] = tau[j];
        s.qd[k][l * kJointsPerLeg + j] = qd[j];
      }
    }
    if (s.excluded[k]) ++s.singular_rows;
  }

  if (static_cast<double>(s.singular_rows) > kMaxSingularFraction * static_cast<double>(n)) {
    throw Error(ErrorKind::TooManySingularRows,
                std::to_string(s.singular_rows) + " of " + std::to_string(n) +
                    " rows are near-singular");
  }

  if (tau_free && n >= 2) {
    const double a = terrain.alpha();
    const Vec3 gravity(terrain.g * std::sin(a), 0.0, -terrain.g * std::cos(a));
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t lo = k == 0 ? 0 : k - 1;
      const std::size_t hi = k + 1 == n ? n - 1 : k + 1;
      const double span = s.t[hi] - s.t[lo];
      for (Leg leg : kAllLegs) {
        const std::size_t l = index(leg);
        if (!log.legs_present[l]) continue;
        JointVector qdd;
        for (std::size_t j = 0; j < kJointsPerLeg; ++j) {
          const std::size_t c = l * kJointsPerLeg + j;
          qdd[j] = (s.qd[hi][c] - s.qd[lo][c]) / span;
        }
        const JointTorques extra = limb_free_torque(robot.leg(leg), log.rows[first + k].legs[l].q,
                                                    qdd, robot.thigh_mass, robot.shank_mass, gravity);
        for (std::size_t j = 0; j < kJointsPerLeg; ++j) s.tau[k][l * kJointsPerLeg + j] += extra[j];
      }
    }
  }
  return s;
}

ActiveWindow active_window(const TrialLog& log) {
  if (log.rows.size() < 2) throw Error(ErrorKind::WindowOutOfRange, "log has fewer than two rows");
  if (!log.has_command) return {0, log.rows.size() - 1};
  std::size_t first = log.rows.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < log.rows.size(); ++i) {
    if (log.rows[i].cmd_speed > kActiveSpeedThreshold) {
      if (first == log.rows.size()) first = i;
      last = i;
    }
  }
  if (first == log.rows.size() || last <= first) {
    throw Error(ErrorKind::WindowOutOfRange, "no active locomotion in the log");
  }
  return {first, last};
}

double travelled_distance(const TrialLog& log, std::size_t first, std::size_t last) {
  CompensatedSum path;
  for (std::size_t i = first; i < last; ++i) {
    const Vec3& a = log.rows[i].base;
    const Vec3& b = log.rows[i + 1].base;
    path.add(std::hypot(b.x() - a.x(), b.y() - a.y()));
  }
  return path.value() - (log.rows[last].slip - log.rows[first].slip);
}

std::array<bool, kNumJoints> joint_mask(ControlMode mode, JointSelection selection,
                                        const PerLeg<bool>& legs_present) {
  std::array<bool, kNumJoints> mask{};
  for (Leg leg : kAllLegs) {
    bool use = legs_present[index(leg)];
    if (selection == JointSelection::Active && mode == ControlMode::Sliding) {
      use = use && is_front(leg);
    }
    for (std::size_t j = 0; j < kJointsPerLeg; ++j) mask[index(leg) * kJointsPerLeg + j] = use;
  }
  return mask;
}

CoTResult cot_for_trial(const TrialLog& log, const RobotSpec& robot, const TerrainSpec& terrain,
                        const CoTOptions& options) {
  const ActiveWindow w = active_window(log);
  // Logs without joint columns can only go through the Jacobian mapping.
  const SignalPath path = log.has_joint_signals ? options.path : SignalPath::Cartesian;
  const JointSeries series =
      path == SignalPath::Joint
          ? joint_signals(log, w.first, w.last)
          : reconstruct_joint_signals(log, robot, terrain, w.first, w.last, options.tau_free);
  const EnergyResult energy =
      mechanical_energy(series, series.t.front(), series.t.back(),
                        joint_mask(log.meta.mode, options.joints, log.legs_present));

  CoTResult r;
  r.energy = energy.total;
  r.per_joint = energy.per_joint;
  r.distance = travelled_distance(log, w.first, w.last);
  r.cot = cost_of_transport(r.energy, robot.mass, terrain.g, r.distance);
  r.mode = log.meta.mode;
  r.alpha_deg = terrain.alpha_deg;
  r.mu_s = terrain.mu_s;
  r.speed = log.meta.speed;
  r.path = path;
  r.provenance = log.meta.provenance;
  r.singular_rows = series.singular_rows;
  return r;
}

}  // namespace cot_atlas
