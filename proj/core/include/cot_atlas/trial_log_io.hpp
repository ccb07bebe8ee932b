#pragma once

#include <iosfwd>
#include <string>

#include "cot_atlas/terrain.hpp"
#include "cot_atlas/trial_log.hpp"

namespace cot_atlas {

// Trial CSV: `# key = value` metadata lines, a header, one row per control tick.
void write_trial_csv(std::ostream& out, const TrialLog& log);
TrialLog read_trial_csv(std::istream& in);  // throws SchemaError, NonMonotoneTime

// Cartesian log of the front feet plus base position, as produced by an
// external simulator. Columns: t, then for lf and rf: fx fy fz vx vy vz q_haa
// q_hfe q_kfe, then base_x base_y base_z.
struct ExternalSidecar {
  double mass = 0.0;
  double gravity = 0.0;
  double alpha_deg = 0.0;
  double mu_s = 0.0;
  std::string trial_id = "external";
};

ExternalSidecar parse_sidecar(const std::string& text);  // throws SchemaError
std::string format_sidecar(const ExternalSidecar& sidecar);

// Throws SchemaError, NonMonotoneTime, UnitSanity (|F| > 100 m g, non-finite
// values, non-positive mass or gravity).
TrialLog ingest_external_log(std::istream& csv, const ExternalSidecar& sidecar);
TrialLog ingest_external_log(const std::string& csv_path, const std::string& sidecar_path);

// Writes the active window of an internal log in the external layout.
void export_external_log(std::ostream& out, const TrialLog& log);
ExternalSidecar sidecar_for(const TrialLog& log);

// Robot and terrain matching an ingested log's sidecar.
RobotSpec robot_for(const TrialLog& log, const RobotSpec& base = {});
TerrainSpec terrain_for(const TrialLog& log);

}  // namespace cot_atlas
