#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cot_atlas/energetics.hpp"
#include "cot_atlas/error.hpp"
#include "cot_atlas/trial.hpp"

namespace cot_atlas {

struct SweepGrid {
  std::vector<double> slopes{0, 5, 10, 15, 20, 25, 30, 35};  // deg
  std::vector<double> speeds{0.1, 0.2, 0.3};                 // walking only, m/s
  std::vector<double> frictions{0.4, 0.5, 0.6, 0.7, 0.8};    // sliding only
  int repetitions = 10;
  std::uint64_t master_seed = 0;

  void validate() const;
  // Walking: the speeds; sliding: the frictions.
  const std::vector<double>& conditions(ControlMode mode) const;
  std::size_t trial_count(ControlMode mode) const;
};

struct AggregateResult {
  double mean = 0.0;
  double std = 0.0;  // unbiased, 0 for a single success
  int n_ok = 0;
  int n_fail = 0;
};

// Sample mean and (n-1) std of the successes. Throws AllTrialsFailed.
AggregateResult aggregate(const std::vector<std::optional<double>>& values);

struct CurvePoint {
  double alpha_deg = 0.0;
  bool present = false;  // false when every repetition failed
  double mean = 0.0;
  double std = 0.0;
  int n_ok = 0;
  int n_fail = 0;
};

// One walking speed or one sliding friction across the slopes.
struct CoTCurve {
  ControlMode mode = ControlMode::Sliding;
  double speed = 0.0;  // walking speed, or the slide stroke speed
  double mu_s = 0.0;   // torso friction when sliding, foot friction when walking
  std::vector<CurvePoint> points;  // ascending slope

  const CurvePoint* at(double alpha_deg) const;
};

struct TrialRecord {
  std::string trial_id;
  ControlMode mode = ControlMode::Sliding;
  double condition = 0.0;
  double alpha_deg = 0.0;
  int rep = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  CoTResult cot;
  std::optional<ErrorKind> failure;
  std::string message;
};

struct SweepOptions {
  // 0 picks the hardware concurrency. COT_ATLAS_WORKERS caps the pool.
  unsigned workers = 0;
  CoTOptions cot;
  // Called from worker threads, once per successful trial.
  std::function<void(const TrialRecord&, const TrialLog&)> on_trial;
};

struct SweepResult {
  std::vector<CoTCurve> curves;     // grid order
  std::vector<TrialRecord> trials;  // grid order
};

std::uint64_t trial_seed(std::uint64_t master, ControlMode mode, double condition,
                         double alpha_deg, int rep);
std::string trial_name(ControlMode mode, double condition, double alpha_deg, int rep);

// Per-trial configuration derived from the base settings.
TrialConfig trial_config(const TrialConfig& base, const SweepGrid& grid, ControlMode mode,
                         double condition, double alpha_deg, int rep);

unsigned resolve_workers(unsigned requested);

// Runs every (condition, slope, repetition) of the grid. Trial failures are
// recorded, never thrown. Output does not depend on worker scheduling.
SweepResult run_sweep(const TrialConfig& base, const SweepGrid& grid, ControlMode mode,
                      const SweepOptions& options = {});

}  // namespace cot_atlas
