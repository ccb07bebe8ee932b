#pragma once

#include <string_view>
#include <vector>

#include "cot_atlas/sweep.hpp"

namespace cot_atlas {

struct DeltaPoint {
  double alpha_deg = 0.0;
  double delta = 0.0;  // CoT_slide - CoT_walk
  double std = 0.0;
};

struct DeltaCurve {
  double walk_speed = 0.0;
  double mu_s = 0.0;  // sliding friction
  std::vector<DeltaPoint> points;      // ascending slope, present in both curves
  std::vector<double> dropped_slopes;  // absent from one of the curves
};

// Pointwise difference of means, std sqrt(sw^2 + ss^2). Throws
// InsufficientOverlap with fewer than two common slopes.
DeltaCurve delta_cot(const CoTCurve& walk, const CoTCurve& slide);

enum class CrossoverClass { Crossings, AlwaysSlidePreferred, AlwaysWalkPreferred };
std::string_view crossover_class_name(CrossoverClass c);

struct Crossing {
  double alpha_star = 0.0;
  double bracket_lo = 0.0;  // equal to bracket_hi for a zero on a grid point
  double bracket_hi = 0.0;
};

struct CrossoverResult {
  double walk_speed = 0.0;
  double mu_s = 0.0;
  CrossoverClass classification = CrossoverClass::Crossings;
  std::vector<Crossing> crossings;

  // First crossing; -inf when sliding is always preferred, +inf when walking is.
  double ordering_key() const;
};

// Sign changes between consecutive points give a linearly interpolated
// crossing. A zero on a grid point is itself a crossing (a run of zeros counts
// once), including a touch that does not change sign.
CrossoverResult find_crossovers(const DeltaCurve& delta);

struct OrderingRow {
  double fixed = 0.0;  // speed (friction table) or friction (speed table)
  std::vector<std::pair<double, double>> keys;  // (varied value, ordering key), ascending
};

struct OrderingReport {
  std::vector<OrderingRow> by_speed;     // alpha* over mu_s at each walking speed
  std::vector<OrderingRow> by_friction;  // alpha* over v at each friction
  bool friction_monotone = true;         // alpha* non-decreasing in mu_s
  bool speed_anticipation = true;        // alpha* non-increasing in v
};

OrderingReport crossover_ordering_report(const std::vector<CrossoverResult>& results);

// Every walking curve against every sliding curve.
std::vector<CrossoverResult> crossover_matrix(const std::vector<CoTCurve>& walk,
                                              const std::vector<CoTCurve>& slide);

}  // namespace cot_atlas
