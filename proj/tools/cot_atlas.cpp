// cot_atlas command-line tool: single trials, sweeps, external log replay and
// the crossover post-processing.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cot_atlas/config.hpp"
#include "cot_atlas/crossover.hpp"
#include "cot_atlas/energetics.hpp"
#include "cot_atlas/error.hpp"
#include "cot_atlas/sweep.hpp"
#include "cot_atlas/tables.hpp"
#include "cot_atlas/trial.hpp"
#include "cot_atlas/trial_log_io.hpp"

namespace fs = std::filesystem;
using namespace cot_atlas;

namespace {

// Options shared by the commands that build a RunConfig.
struct ConfigFlags {
  std::string config_path;
  bool allow_extended = false;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("-c,--config", f.config_path, "Config file (sectioned key = value)");
  cmd->add_flag("--allow-extended-ranges", f.allow_extended,
                "Accept slopes above 35 deg and friction outside [0.4, 0.8]");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("-o,--out", f.out, "Output directory");
  cmd->add_option("--workers", f.workers, "Worker threads (0 = all cores)");
}

RunConfig resolve(const ConfigFlags& f) {
  RunConfig c = f.config_path.empty() ? load_config_text("", f.allow_extended)
                                      : load_config(f.config_path, f.allow_extended);
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.output_dir = *f.out;
  if (f.workers) c.workers = *f.workers;
  c.sync_seed();
  return c;
}

void write_file(const fs::path& p, const std::string& text) { write_text_file(p.string(), text); }

std::string manifest(const RunConfig& c, const std::string& command) {
  std::string out = "[manifest]\nversion = " + std::string(library_version()) +
                    "\ncommand = " + command + "\n\n";
  return out + serialize_config(c);
}

ControlMode to_control(RunMode m) {
  return m == RunMode::Walk ? ControlMode::Walking : ControlMode::Sliding;
}

int cmd_simulate(const ConfigFlags& f, const std::optional<std::string>& mode,
                 const std::optional<double>& alpha, const std::optional<double>& mu,
                 const std::optional<double>& speed, bool no_jitter) {
  RunConfig c = resolve(f);
  if (mode) c.mode = parse_run_mode(*mode);
  if (c.mode == RunMode::Both) throw Error(ErrorKind::InvariantViolation, "simulate runs one mode");
  TrialConfig& t = c.trial;
  t.mode = to_control(c.mode);
  if (alpha) t.terrain.alpha_deg = *alpha;
  if (mu) {
    t.terrain.mu_s = *mu;
    t.terrain.mu_d = kDynamicFrictionRatio * *mu;
  }
  if (t.mode == ControlMode::Walking) {
    t.terrain.mu_s = t.contact.foot_static(t.terrain);
    t.terrain.mu_d = kDynamicFrictionRatio * t.terrain.mu_s;
  }
  if (speed) t.walk_speed = *speed;
  if (no_jitter) t.jitter = false;
  c.validate();

  const TrialLog log = simulate_trial(t);
  const CoTResult r = cot_for_trial(log, t.robot, t.terrain, c.cot);

  fs::create_directories(c.output_dir);
  const fs::path dir(c.output_dir);
  {
    std::ofstream out(dir / ("trial_" + t.trial_id + ".csv"), std::ios::binary);
    write_trial_csv(out, log);
  }
  {
    // Same trial in the external Cartesian layout, for replay.
    std::ofstream out(dir / ("external_" + t.trial_id + ".csv"), std::ios::binary);
    export_external_log(out, log);
  }
  write_file(dir / ("external_" + t.trial_id + ".cfg"), format_sidecar(sidecar_for(log)));
  std::ostringstream results;
  write_cot_results_header(results);
  write_cot_result_row(results, t.trial_id, r);
  write_file(dir / "result.csv", results.str());
  write_file(dir / "manifest.cfg", manifest(c, "simulate"));

  std::printf("%s: E = %.6g J, d = %.6g m, CoT = %.6g (%zu rows)\n", t.trial_id.c_str(), r.energy,
              r.distance, r.cot, log.rows.size());
  return 0;
}

int cmd_sweep(const ConfigFlags& f, const std::optional<std::string>& mode,
              const std::optional<int>& reps, bool trial_logs, bool quiet) {
  RunConfig c = resolve(f);
  if (mode) c.mode = parse_run_mode(*mode);
  if (reps) c.grid.repetitions = *reps;
  if (trial_logs) c.trial_logs = true;
  c.validate();

  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  if (c.trial_logs) fs::create_directories(dir / "trials");

  SweepOptions opt;
  opt.workers = c.workers;
  opt.cot = c.cot;
  std::mutex progress;
  std::size_t done = 0;
  std::size_t total = 0;
  opt.on_trial = [&](const TrialRecord& rec, const TrialLog& log) {
    if (c.trial_logs) {
      std::ofstream out(dir / "trials" / ("trial_" + rec.trial_id + ".csv"), std::ios::binary);
      write_trial_csv(out, log);
    }
    if (!quiet) {
      std::lock_guard lock(progress);
      std::fprintf(stderr, "\r%zu/%zu trials", ++done, total);
    }
  };

  std::vector<ControlMode> modes;
  if (c.mode != RunMode::Slide) modes.push_back(ControlMode::Walking);
  if (c.mode != RunMode::Walk) modes.push_back(ControlMode::Sliding);

  std::vector<CoTCurve> curves;
  std::vector<TrialRecord> trials;
  for (ControlMode m : modes) {
    total = c.grid.trial_count(m);
    done = 0;
    SweepResult res = run_sweep(c.trial, c.grid, m, opt);
    if (!quiet) std::fprintf(stderr, "\n");
    curves.insert(curves.end(), res.curves.begin(), res.curves.end());
    trials.insert(trials.end(), res.trials.begin(), res.trials.end());
  }

  std::ostringstream cs, ts;
  write_curves_csv(cs, curves);
  write_trials_csv(ts, trials);
  write_file(dir / "curves.csv", cs.str());
  write_file(dir / "trials.csv", ts.str());
  write_file(dir / "manifest.cfg", manifest(c, "sweep"));

  std::size_t failed = 0;
  for (const auto& t : trials) failed += t.ok ? 0 : 1;
  std::printf("%zu trials, %zu failed; curves in %s\n", trials.size(), failed,
              (dir / "curves.csv").string().c_str());
  return 0;
}

int cmd_replay(const std::vector<std::string>& logs, const std::vector<std::string>& sidecars,
               const std::vector<std::string>& trial_csvs, const std::string& config_path,
               const std::string& path, bool tau_free, const std::string& out_path) {
  if (logs.size() != sidecars.size()) {
    throw CLI::ValidationError("--sidecar", "one sidecar per --log is required");
  }
  if (logs.empty() && trial_csvs.empty()) {
    throw CLI::ValidationError("replay", "give --log/--sidecar pairs or --trial files");
  }
  const RunConfig c = config_path.empty() ? load_config_text("") : load_config(config_path);
  CoTOptions opt = c.cot;
  opt.tau_free = opt.tau_free || tau_free;
  if (path == "cartesian") opt.path = SignalPath::Cartesian;
  else if (path == "joint") opt.path = SignalPath::Joint;

  std::ostringstream out;
  write_cot_results_header(out);
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const TrialLog log = ingest_external_log(logs[i], sidecars[i]);
    const CoTResult r = cot_for_trial(log, robot_for(log, c.trial.robot), terrain_for(log), opt);
    write_cot_result_row(out, log.meta.trial_id, r);
  }
  for (const auto& p : trial_csvs) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + p);
    const TrialLog log = read_trial_csv(in);
    const CoTResult r = cot_for_trial(log, robot_for(log, c.trial.robot), terrain_for(log), opt);
    write_cot_result_row(out, log.meta.trial_id, r);
  }
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    write_text_file(out_path, out.str());
  }
  return 0;
}

std::vector<CoTCurve> load_curves(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_curves_csv(in);
}

void split_modes(const std::vector<CoTCurve>& all, std::vector<CoTCurve>& walk,
                 std::vector<CoTCurve>& slide) {
  for (const auto& c : all) (c.mode == ControlMode::Walking ? walk : slide).push_back(c);
}

int cmd_crossover(const std::string& curves_path, const std::string& out_dir_arg) {
  std::vector<CoTCurve> walk, slide;
  split_modes(load_curves(curves_path), walk, slide);
  if (walk.empty() || slide.empty()) {
    throw Error(ErrorKind::SchemaError, "curves file needs both walk and slide curves");
  }
  const auto results = crossover_matrix(walk, slide);
  const OrderingReport report = crossover_ordering_report(results);

  const fs::path dir = out_dir_arg.empty() ? fs::path(curves_path).parent_path() : fs::path(out_dir_arg);
  if (!dir.empty()) fs::create_directories(dir);
  std::ostringstream xs, os;
  write_crossovers_csv(xs, results);
  write_ordering_report(os, report);
  write_file(dir / "crossovers.csv", xs.str());
  write_file(dir / "ordering.csv", os.str());

  for (const auto& r : results) {
    std::printf("v = %.2f, mu_s = %.2f: %s", r.walk_speed, r.mu_s,
                std::string(crossover_class_name(r.classification)).c_str());
    for (const auto& x : r.crossings) std::printf(" %.3f", x.alpha_star);
    std::printf("\n");
  }
  std::printf("friction_monotone = %s, speed_anticipation = %s\n",
              report.friction_monotone ? "true" : "false",
              report.speed_anticipation ? "true" : "false");
  return 0;
}

int cmd_plot_data(const std::string& curves_path, const std::string& results_path,
                  const std::string& out_dir) {
  const auto curves = load_curves(curves_path);
  std::vector<CoTCurve> walk, slide;
  split_modes(curves, walk, slide);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  std::ostringstream w, s;
  write_walking_plot(w, curves);
  write_sliding_plot(s, curves);
  write_file(dir / "walking_cot.csv", w.str());
  write_file(dir / "sliding_cot.csv", s.str());

  if (!walk.empty() && !slide.empty()) {
    std::vector<DeltaCurve> deltas;
    for (const auto& wc : walk) {
      for (const auto& sc : slide) deltas.push_back(delta_cot(wc, sc));
    }
    std::ostringstream d;
    write_delta_plot(d, deltas);
    write_file(dir / "delta_cot.csv", d.str());
  }
  if (!results_path.empty()) {
    std::ifstream in(results_path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + results_path);
    std::ostringstream x;
    write_simulator_plot(x, curves, read_cot_results_csv(in));
    write_file(dir / "simulator_comparison.csv", x.str());
  }
  std::printf("plot data in %s\n", dir.string().c_str());
  return 0;
}

int cmd_validate(const ConfigFlags& f) {
  const RunConfig c = resolve(f);
  c.validate();
  std::cout << serialize_config(c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cost-of-transport atlas for walking and sliding quadruped descents"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1);

  ConfigFlags sim_flags, sweep_flags, validate_flags;
  std::optional<std::string> sim_mode, sweep_mode;
  std::optional<double> alpha, mu, speed;
  bool no_jitter = false;
  auto* sim = app.add_subcommand("simulate", "Run one trial and write its log and CoT");
  add_config_flags(sim, sim_flags);
  sim->add_option("--mode", sim_mode, "walk or slide")->check(CLI::IsMember({"walk", "slide"}));
  sim->add_option("--alpha", alpha, "Slope, deg");
  sim->add_option("--mu", mu, "Torso-ground static friction");
  sim->add_option("--speed", speed, "Walking speed, m/s");
  sim->add_flag("--no-jitter", no_jitter, "Disable the seeded initial jitter");

  std::optional<int> reps;
  bool trial_logs = false, quiet = false;
  auto* sweep = app.add_subcommand("sweep", "Run the slope/friction/speed grid");
  add_config_flags(sweep, sweep_flags);
  sweep->add_option("--mode", sweep_mode, "walk, slide or both")
      ->check(CLI::IsMember({"walk", "slide", "both"}));
  sweep->add_option("--reps", reps, "Repetitions per grid point")->check(CLI::PositiveNumber);
  sweep->add_flag("--trial-logs", trial_logs, "Also write one CSV per trial under trials/");
  sweep->add_flag("-q,--quiet", quiet, "No progress output");

  std::vector<std::string> logs, sidecars, trial_csvs;
  std::string replay_config, replay_path = "auto", replay_out;
  bool tau_free = false;
  auto* replay = app.add_subcommand("replay", "Compute CoT from external Cartesian logs");
  replay->add_option("--log", logs, "External Cartesian log CSV")->check(CLI::ExistingFile);
  replay->add_option("--sidecar", sidecars, "Metadata sidecar for each --log")
      ->check(CLI::ExistingFile);
  replay->add_option("--trial", trial_csvs, "Internal trial CSV")->check(CLI::ExistingFile);
  replay->add_option("-c,--config", replay_config, "Config supplying the leg geometry");
  replay->add_option("--path", replay_path, "Signal path for internal logs")
      ->check(CLI::IsMember({"auto", "joint", "cartesian"}));
  replay->add_flag("--tau-free", tau_free, "Add the limb point-mass torque");
  replay->add_option("-o,--out", replay_out, "Results CSV (default: stdout)");

  std::string curves_path, crossover_out;
  auto* cross = app.add_subcommand("crossover", "Delta CoT crossings from a curves file");
  cross->add_option("--curves", curves_path, "curves.csv")->required()->check(CLI::ExistingFile);
  cross->add_option("-o,--out", crossover_out, "Output directory (default: next to curves)");

  std::string plot_curves, plot_results, plot_out = "plot-data";
  auto* plot = app.add_subcommand("plot-data", "Tidy CSV tables for plotting");
  plot->add_option("--curves", plot_curves, "curves.csv")->required()->check(CLI::ExistingFile);
  plot->add_option("--results", plot_results, "Replay results for the simulator comparison")
      ->check(CLI::ExistingFile);
  plot->add_option("-o,--out", plot_out, "Output directory");

  auto* validate = app.add_subcommand("validate-config", "Check a config and print it resolved");
  add_config_flags(validate, validate_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sim) return cmd_simulate(sim_flags, sim_mode, alpha, mu, speed, no_jitter);
    if (*sweep) return cmd_sweep(sweep_flags, sweep_mode, reps, trial_logs, quiet);
    if (*replay) {
      return cmd_replay(logs, sidecars, trial_csvs, replay_config, replay_path, tau_free, replay_out);
    }
    if (*cross) return cmd_crossover(curves_path, crossover_out);
    if (*plot) return cmd_plot_data(plot_curves, plot_results, plot_out);
    if (*validate) return cmd_validate(validate_flags);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
