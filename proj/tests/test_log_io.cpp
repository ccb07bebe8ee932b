#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "cot_atlas/energetics.hpp"
#include "cot_atlas/error.hpp"
#include "cot_atlas/tables.hpp"
#include "cot_atlas/trial.hpp"
#include "cot_atlas/trial_log_io.hpp"

using namespace cot_atlas;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

struct SlideTrial {
  TrialConfig config;
  TrialLog log;
};

const SlideTrial& slide_trial() {
  static const SlideTrial t = [] {
    SlideTrial s;
    s.config.terrain = TerrainSpec::make(20.0, 0.6);
    s.config.seed = 17;
    s.config.trial_id = "probe";
    s.log = simulate_trial(s.config);
    return s;
  }();
  return t;
}

std::string exported(const TrialLog& log) {
  std::ostringstream out;
  export_external_log(out, log);
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string join(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  return s;
}

}  // namespace

TEST(TrialCsv, RoundTripIsLossless) {
  const TrialLog& log = slide_trial().log;
  std::ostringstream a;
  write_trial_csv(a, log);
  std::istringstream in(a.str());
  const TrialLog back = read_trial_csv(in);
  std::ostringstream b;
  write_trial_csv(b, back);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(back.meta.trial_id, "probe");
  EXPECT_EQ(back.rows.size(), log.rows.size());
  const CoTResult x = cot_for_trial(log, RobotSpec{}, slide_trial().config.terrain);
  const CoTResult y = cot_for_trial(back, RobotSpec{}, terrain_for(back));
  EXPECT_EQ(x.cot, y.cot);
}

TEST(TrialCsv, LocaleIndependentLayout) {
  std::ostringstream a;
  write_trial_csv(a, slide_trial().log);
  const std::string s = a.str();
  EXPECT_EQ(s.find('\r'), std::string::npos);
  EXPECT_EQ(s.find("# trial_id = probe"), 0u);
}

TEST(ExternalLog, ExportIngestPreservesCoT) {
  const SlideTrial& t = slide_trial();
  std::istringstream in(exported(t.log));
  const TrialLog ext = ingest_external_log(in, sidecar_for(t.log));
  EXPECT_EQ(ext.meta.provenance, Provenance::External);
  EXPECT_FALSE(ext.has_joint_signals);

  CoTOptions cart;
  cart.path = SignalPath::Cartesian;
  cart.joints = JointSelection::Active;
  const CoTResult internal = cot_for_trial(t.log, t.config.robot, t.config.terrain, cart);
  const CoTResult replay = cot_for_trial(ext, robot_for(ext), terrain_for(ext));
  EXPECT_EQ(replay.path, SignalPath::Cartesian);
  EXPECT_EQ(replay.provenance, Provenance::External);
  EXPECT_NEAR(replay.cot, internal.cot, 1e-9);
  EXPECT_NEAR(replay.distance, internal.distance, 1e-9);
}

TEST(ExternalLog, ShuffledRowsRejected) {
  auto lines = lines_of(exported(slide_trial().log));
  std::mt19937 rng(1);
  std::shuffle(lines.begin() + 1, lines.end(), rng);
  std::istringstream in(join(lines));
  EXPECT_EQ(kind_of([&] { ingest_external_log(in, sidecar_for(slide_trial().log)); }),
            ErrorKind::NonMonotoneTime);
}

TEST(ExternalLog, SidecarMissingMass) {
  EXPECT_EQ(kind_of([] { parse_sidecar("gravity = 1.625\nalpha_deg = 10\nmu_s = 0.6\n"); }),
            ErrorKind::SchemaError);
  EXPECT_EQ(kind_of([] { parse_sidecar("mass = 24\ngravity = 1.625\nalpha_deg = 10\nmu_s = 0.6\nspin = 2\n"); }),
            ErrorKind::SchemaError);
}

TEST(ExternalLog, SidecarRoundTrip) {
  ExternalSidecar s;
  s.mass = 24.0;
  s.gravity = 1.625;
  s.alpha_deg = 12.5;
  s.mu_s = 0.45;
  s.trial_id = "lab_run_3";
  const ExternalSidecar back = parse_sidecar(format_sidecar(s));
  EXPECT_EQ(back.mass, s.mass);
  EXPECT_EQ(back.alpha_deg, s.alpha_deg);
  EXPECT_EQ(back.trial_id, s.trial_id);
}

TEST(ExternalLog, ImplausibleForceRejected) {
  auto lines = lines_of(exported(slide_trial().log));
  // fz of lf is the fourth column
  std::string& row = lines[5];
  std::vector<std::string> cells;
  std::stringstream ss(row);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  cells[3] = "1e6";
  row.clear();
  for (std::size_t i = 0; i < cells.size(); ++i) row += (i ? "," : "") + cells[i];
  std::istringstream in(join(lines));
  EXPECT_EQ(kind_of([&] { ingest_external_log(in, sidecar_for(slide_trial().log)); }),
            ErrorKind::UnitSanity);
}

TEST(ExternalLog, HeaderChecked) {
  auto lines = lines_of(exported(slide_trial().log));
  lines[0] = "t,lf_fx";
  std::istringstream in(join(lines));
  EXPECT_EQ(kind_of([&] { ingest_external_log(in, sidecar_for(slide_trial().log)); }),
            ErrorKind::SchemaError);
}

TEST(ExternalLog, NonPositiveMass) {
  ExternalSidecar s = sidecar_for(slide_trial().log);
  s.mass = 0.0;
  std::istringstream in(exported(slide_trial().log));
  EXPECT_EQ(kind_of([&] { ingest_external_log(in, s); }), ErrorKind::UnitSanity);
}

TEST(CoTResultsCsv, RoundTrip) {
  const SlideTrial& t = slide_trial();
  const CoTResult r = cot_for_trial(t.log, t.config.robot, t.config.terrain);
  std::ostringstream out;
  write_cot_results_header(out);
  write_cot_result_row(out, "probe", r);
  std::istringstream in(out.str());
  const auto rows = read_cot_results_csv(in);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].trial_id, "probe");
  EXPECT_EQ(rows[0].result.cot, r.cot);
  EXPECT_EQ(rows[0].result.alpha_deg, 20.0);
}
