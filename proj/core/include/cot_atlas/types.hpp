#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include <Eigen/Core>

namespace cot_atlas {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Joint-space quantities are ordered (HAA, HFE, KFE).
using JointVector = Eigen::Vector3d;
using JointRates = Eigen::Vector3d;
using JointTorques = Eigen::Vector3d;

// Cartesian foot position in the hip frame: x forward, y left, z up.
using FootPoint = Eigen::Vector3d;

enum class Leg : std::size_t { LF = 0, RF = 1, LH = 2, RH = 3 };

inline constexpr std::size_t kNumLegs = 4;
inline constexpr std::size_t kJointsPerLeg = 3;
inline constexpr std::size_t kNumJoints = kNumLegs * kJointsPerLeg;

inline constexpr std::array<Leg, kNumLegs> kAllLegs{Leg::LF, Leg::RF, Leg::LH, Leg::RH};

constexpr std::size_t index(Leg leg) { return static_cast<std::size_t>(leg); }
constexpr bool is_front(Leg leg) { return leg == Leg::LF || leg == Leg::RF; }
constexpr bool is_left(Leg leg) { return leg == Leg::LF || leg == Leg::LH; }

constexpr std::string_view leg_name(Leg leg) {
  switch (leg) {
    case Leg::LF: return "lf";
    case Leg::RF: return "rf";
    case Leg::LH: return "lh";
    case Leg::RH: return "rh";
  }
  return "??";
}

template <typename T>
using PerLeg = std::array<T, kNumLegs>;

enum class ControlMode { Walking, Sliding };

constexpr std::string_view mode_name(ControlMode m) {
  return m == ControlMode::Walking ? "walk" : "slide";
}

inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }

}  // namespace cot_atlas
