#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cot_atlas/crossover.hpp"
#include "cot_atlas/energetics.hpp"
#include "cot_atlas/sweep.hpp"

namespace cot_atlas {

// curves.csv: mode,speed,mu_s,alpha_deg,cot_mean,cot_std,n_ok,n_fail. Absent
// points have empty mean and std.
void write_curves_csv(std::ostream& out, const std::vector<CoTCurve>& curves);
std::vector<CoTCurve> read_curves_csv(std::istream& in);  // throws SchemaError

// crossovers.csv: walk_speed,mu_s,classification,alpha_star_list,bracket_lo,bracket_hi.
// Lists are ';'-separated, one entry per crossing.
void write_crossovers_csv(std::ostream& out, const std::vector<CrossoverResult>& results);

void write_ordering_report(std::ostream& out, const OrderingReport& report);

// trials.csv: one line per sweep trial, failures included.
void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& trials);

// CoTResult rows as written by `replay` and `simulate`.
void write_cot_results_header(std::ostream& out);
void write_cot_result_row(std::ostream& out, const std::string& trial_id, const CoTResult& r);

struct CoTResultRow {
  std::string trial_id;
  CoTResult result;
};
std::vector<CoTResultRow> read_cot_results_csv(std::istream& in);

// Tidy per-figure tables.
void write_walking_plot(std::ostream& out, const std::vector<CoTCurve>& curves);
void write_sliding_plot(std::ostream& out, const std::vector<CoTCurve>& curves);
void write_delta_plot(std::ostream& out, const std::vector<DeltaCurve>& deltas);
// Internal sliding curve points next to externally replayed trials at the same
// (alpha, mu_s).
void write_simulator_plot(std::ostream& out, const std::vector<CoTCurve>& curves,
                          const std::vector<CoTResultRow>& external);

}  // namespace cot_atlas
