// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cot_atlas/config.hpp"
#include "cot_atlas/crossover.hpp"
#include "cot_atlas/dynamics.hpp"
#include "cot_atlas/energetics.hpp"
#include "cot_atlas/error.hpp"
#include "cot_atlas/leg_kinematics.hpp"
#include "cot_atlas/sweep.hpp"
#include "cot_atlas/tables.hpp"
#include "cot_atlas/trial.hpp"
#include "cot_atlas/trial_log_io.hpp"

using namespace cot_atlas;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

int failures = 0;

void report(int n, const char* name, const std::function<Verdict()>& check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  if (!v.pass) ++failures;
  std::printf("%s  [%d] %s: %s\n", v.pass ? "PASS" : "FAIL", n, name, v.detail.c_str());
  std::fflush(stdout);
}

// 1 ------------------------------------------------------------------------

Verdict kinematics() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> haa(-0.6, 0.6), hfe(-1.2, 1.2), kfe(-2.6, -0.15);
  double worst_fk_ik = 0.0, worst_jac = 0.0;
  for (int i = 0; i < 10000; ++i) {
    LegGeometry g;
    g.side = i % 2 ? 1.0 : -1.0;
    const JointVector q(haa(rng), hfe(rng), kfe(rng));
    const FootPoint p = forward_kinematics(g, q);
    worst_fk_ik = std::max(worst_fk_ik, (forward_kinematics(g, inverse_kinematics(g, p).q) - p).norm());
  }
  const double h = 1e-6;
  for (int i = 0; i < 1000; ++i) {
    const LegGeometry g;
    const JointVector q(haa(rng), hfe(rng), kfe(rng));
    Mat3 fd;
    for (int c = 0; c < 3; ++c) {
      JointVector qp = q, qm = q;
      qp[c] += h;
      qm[c] -= h;
      fd.col(c) = (forward_kinematics(g, qp) - forward_kinematics(g, qm)) / (2 * h);
    }
    const Mat3 j = jacobian(g, q);
    worst_jac = std::max(worst_jac, (j - fd).norm() / j.norm());
  }
  const double dt = seconds_since(t0);
  v.note(fmt("FK(IK) max err %.2e m over 1e4, Jacobian max rel err %.2e over 1e3, %.2f s",
             worst_fk_ik, worst_jac, dt));
  if (worst_fk_ik > 1e-9) v.fail("FK(IK) above 1e-9 m");
  if (worst_jac > 1e-6) v.fail("Jacobian above 1e-6");
  if (dt >= 5.0) v.fail("runtime above 5 s");
  return v;
}

// 2 ------------------------------------------------------------------------

JointSeries one_joint_series(double t_end, double dt, const std::function<double(double)>& tau,
                             const std::function<double(double)>& qd) {
  JointSeries s;
  const int n = static_cast<int>(std::llround(t_end / dt));
  for (int i = 0; i <= n; ++i) {
    const double t = i * dt;
    std::array<double, kNumJoints> a{}, b{};
    a[0] = tau(t);
    b[0] = qd(t);
    s.t.push_back(t);
    s.tau.push_back(a);
    s.qd.push_back(b);
  }
  return s;
}

Verdict energetics() {
  Verdict v;
  std::array<bool, kNumJoints> all;
  all.fill(true);
  const JointSeries flat = one_joint_series(5.0, 1e-3, [](double) { return 4.0; },
                                            [](double) { return 2.5; });
  const double e_const = mechanical_energy(flat, 0.0, 5.0, all).total;
  const auto sine = [](double t) { return std::sin(2 * kPi * t); };
  const double e_sin = mechanical_energy(one_joint_series(1.0, 1e-3, sine, sine), 0.0, 1.0, all).total;
  const double cot = cost_of_transport(39.0, 24.0, 1.625, 1.0);
  v.note(fmt("constant 10 W x 5 s -> %.17g J, sin^2 -> %.9f J (err %.1e), CoT(39 J) = %.17g",
             e_const, e_sin, std::abs(e_sin - 0.5), cot));
  if (e_const != 50.0) v.fail("constant-power energy not exact");
  if (std::abs(e_sin - 0.5) > 1e-4) v.fail("sinusoidal energy off by more than 1e-4");
  if (cot != 1.0) v.fail("CoT arithmetic not exactly 1");
  return v;
}

// 3 ------------------------------------------------------------------------

struct TuckedSlider {
  SimState state;
  LegCommand command;
};

TuckedSlider tucked(const RobotSpec& robot) {
  TuckedSlider t;
  t.state.base_height = robot.slide_hip_height;
  for (Leg leg : kAllLegs) {
    const std::size_t i = index(leg);
    const FootPoint p(0.0, robot.leg(leg).side * robot.leg(leg).hip_offset, -0.10);
    t.state.q[i] = inverse_kinematics(robot.leg(leg), p).q;
    t.command.refs[i].q = t.state.q[i];
  }
  return t;
}

Verdict coulomb_slider() {
  Verdict v;
  const auto t0 = Clock::now();
  const RobotSpec robot;
  const ContactModel contact;
  const double dt = 1e-3;
  double worst = 0.0;
  int steps_checked = 0, stiction_cases = 0;
  for (double alpha : {10.0, 20.0, 30.0}) {
    for (double mu : {0.4, 0.6, 0.8}) {
      const TerrainSpec terrain = TerrainSpec::make(alpha, mu);
      const double expected = terrain.g * (std::sin(terrain.alpha()) - terrain.mu_d * std::cos(terrain.alpha()));

      TuckedSlider t = tucked(robot);
      t.state.base_v = 0.5;
      SimState s = t.state;
      for (int i = 0; i < 3000 && s.base_v > contact.v_stick; ++i) {
        const SimState n = step_slider(s, t.command, terrain, robot, contact, dt);
        for (Leg leg : kAllLegs) {
          if (n.contact[index(leg)]) v.fail("a foot touched the ground");
        }
        worst = std::max(worst, std::abs((n.base_v - s.base_v) / dt - expected));
        ++steps_checked;
        s = n;
      }

      if (std::tan(terrain.alpha()) < mu) {
        ++stiction_cases;
        SimState r = tucked(robot).state;
        for (int i = 0; i < 60000; ++i) r = step_slider(r, t.command, terrain, robot, contact, dt);
        if (r.base_x != 0.0 || r.base_v != 0.0) {
          v.fail(fmt("stiction lost at alpha %.0f, mu %.1f (x = %.3g)", alpha, mu, r.base_x));
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  v.note(fmt("max accel err %.2e m/s^2 over %d sliding steps, stiction held 60 s in %d cases, %.2f s",
             worst, steps_checked, stiction_cases, elapsed));
  if (worst > 1e-6) v.fail("acceleration error above 1e-6");
  if (elapsed >= 10.0) v.fail("runtime above 10 s");
  return v;
}

// 4 ------------------------------------------------------------------------

Verdict dual_path() {
  Verdict v;
  const std::vector<std::pair<double, double>> cases{{0, 0.4}, {10, 0.5}, {20, 0.6}, {25, 0.7}, {35, 0.8}};
  double worst = 0.0;
  std::string list;
  for (const auto& [alpha, mu] : cases) {
    TrialConfig c;
    c.terrain = TerrainSpec::make(alpha, mu);
    c.seed = static_cast<std::uint64_t>(alpha * 10 + mu * 100);
    const TrialLog log = simulate_trial(c);
    CoTOptions joint, cart;
    cart.path = SignalPath::Cartesian;
    cart.tau_free = false;
    const double a = cot_for_trial(log, c.robot, c.terrain, joint).cot;
    const double b = cot_for_trial(log, c.robot, c.terrain, cart).cot;
    const double rel = std::abs(b - a) / a;
    worst = std::max(worst, rel);
    list += fmt("%s(%.0f,%.1f) %.4f/%.4f", list.empty() ? "" : " ", alpha, mu, a, b);
  }
  v.note(fmt("max rel diff %.2e; joint/cartesian %s", worst, list.c_str()));
  if (worst > 0.05) v.fail("paths differ by more than 5%");
  return v;
}

// 5-7, 10 share one default sweep ---------------------------------------------

struct DefaultSweep {
  SweepResult walk, slide;
  double walk_seconds = 0.0, slide_seconds = 0.0;
};

const DefaultSweep& default_sweep() {
  static const DefaultSweep s = [] {
    DefaultSweep d;
    RunConfig c = load_config_text("[run]\nseed = 42\n");
    c.sync_seed();
    c.validate();
    SweepOptions opt;
    opt.cot = c.cot;
    auto t0 = Clock::now();
    d.slide = run_sweep(c.trial, c.grid, ControlMode::Sliding, opt);
    d.slide_seconds = seconds_since(t0);
    t0 = Clock::now();
    d.walk = run_sweep(c.trial, c.grid, ControlMode::Walking, opt);
    d.walk_seconds = seconds_since(t0);
    return d;
  }();
  return s;
}

Verdict slide_trend() {
  Verdict v;
  const DefaultSweep& d = default_sweep();
  const auto& curves = d.slide.curves;
  int absent = 0;
  for (const auto& c : curves) {
    const CurvePoint* prev = nullptr;
    for (const auto& p : c.points) {
      if (!p.present) {
        ++absent;
        continue;
      }
      if (prev && p.mean > prev->mean) {
        v.fail(fmt("mu %.1f: CoT rises %.4f -> %.4f from %.0f to %.0f deg", c.mu_s, prev->mean,
                   p.mean, prev->alpha_deg, p.alpha_deg));
      }
      prev = &p;
    }
  }
  for (double alpha : {0.0, 5.0, 10.0}) {
    for (std::size_t i = 1; i < curves.size(); ++i) {
      const CurvePoint* a = curves[i - 1].at(alpha);
      const CurvePoint* b = curves[i].at(alpha);
      if (!a || !b || !a->present || !b->present) {
        v.fail(fmt("missing point at %.0f deg", alpha));
      } else if (b->mean < a->mean) {
        v.fail(fmt("%.0f deg: CoT falls %.4f -> %.4f from mu %.1f to %.1f", alpha, a->mean, b->mean,
                   curves[i - 1].mu_s, curves[i].mu_s));
      }
    }
  }
  const double total = d.slide_seconds + d.walk_seconds;
  std::string row;
  for (const auto& c : curves) {
    row += fmt("%smu%.1f %.2f..%.2f", row.empty() ? "" : ", ", c.mu_s, c.points.front().mean,
               c.points.back().mean);
  }
  v.note(fmt("%zu trials, %d absent points; CoT 0..35 deg: %s; sweep %.1f s (both modes %.1f s)",
             d.slide.trials.size(), absent, row.c_str(), d.slide_seconds, total));
  if (d.slide.trials.size() != 400) v.fail("expected 400 sliding trials");
  if (total >= 600.0) v.fail("sweep slower than 10 min");
  return v;
}

Verdict walk_trend() {
  Verdict v;
  const auto& curves = default_sweep().walk.curves;
  const CoTCurve* slow = nullptr;
  const CoTCurve* fast = nullptr;
  for (const auto& c : curves) {
    if (std::abs(c.speed - 0.1) < 1e-12) slow = &c;
    if (std::abs(c.speed - 0.3) < 1e-12) fast = &c;
  }
  if (!slow || !fast) {
    v.fail("missing 0.1 or 0.3 m/s curve");
    return v;
  }
  int compared = 0;
  for (const auto& p : slow->points) {
    const CurvePoint* q = fast->at(p.alpha_deg);
    if (!p.present || !q || !q->present) continue;
    ++compared;
    if (q->mean < p.mean) {
      v.fail(fmt("%.0f deg: 0.3 m/s CoT %.4f below 0.1 m/s %.4f", p.alpha_deg, q->mean, p.mean));
    }
  }
  std::string steep;
  for (const auto& c : curves) {
    const CurvePoint* a = c.at(25.0);
    const CurvePoint* b = c.at(35.0);
    if (!a || !b) {
      v.fail("grid lacks 25 or 35 deg");
      continue;
    }
    if (b->present) {
      if (!a->present || b->mean <= a->mean) v.fail(fmt("v %.1f: no increase 25 -> 35 deg", c.speed));
      steep += fmt(" v%.1f %.2f->%.2f", c.speed, a->present ? a->mean : NAN, b->mean);
    } else {
      steep += fmt(" v%.1f %.2f->fail(%d/%d)", c.speed, a->present ? a->mean : NAN, b->n_fail,
                   b->n_fail + b->n_ok);
    }
  }
  v.note(fmt("v=0.3 >= v=0.1 at %d common slopes; 25->35 deg:%s", compared, steep.c_str()));
  if (compared == 0) v.fail("no common slopes");
  return v;
}

Verdict crossover_structure() {
  Verdict v;
  const DefaultSweep& d = default_sweep();
  const auto results = crossover_matrix(d.walk.curves, d.slide.curves);
  const OrderingReport rep = crossover_ordering_report(results);
  bool early = false;
  std::string at06;
  for (const auto& r : results) {
    for (const auto& x : r.crossings) {
      if (x.alpha_star > 0.0 && x.alpha_star < 20.0) early = true;
    }
    if (std::abs(r.mu_s - 0.6) < 1e-12) {
      const double k = r.ordering_key();
      at06 += std::isfinite(k) ? fmt(" v%.1f:%.2f", r.walk_speed, k)
                               : fmt(" v%.1f:%s", r.walk_speed,
                                     std::string(crossover_class_name(r.classification)).c_str());
    }
  }
  v.note(fmt("%zu pairs; crossing in (0,20) deg: %s; friction_monotone %s; speed_anticipation %s; "
             "mu 0.6 alpha* (reported, not gated):%s",
             results.size(), early ? "yes" : "no", rep.friction_monotone ? "true" : "false",
             rep.speed_anticipation ? "true" : "false", at06.c_str()));
  if (!early) v.fail("no crossing with alpha* in (0, 20) deg");
  if (!rep.friction_monotone) v.fail("friction monotonicity flag false");
  if (!rep.speed_anticipation) v.fail("speed anticipation flag false");
  return v;
}

// 8 ------------------------------------------------------------------------

DeltaCurve hand_delta(std::initializer_list<std::pair<double, double>> pts) {
  DeltaCurve d;
  for (const auto& [a, x] : pts) d.points.push_back({a, x, 0.0});
  return d;
}

Verdict crossover_math() {
  Verdict v;
  const CrossoverResult a = find_crossovers(hand_delta({{5, 0.5}, {10, -0.3}}));
  const CrossoverResult b = find_crossovers(hand_delta({{0, 1.0}, {5, 0.0}, {10, -1.0}}));
  const CrossoverResult c = find_crossovers(hand_delta({{0, -0.2}, {5, -0.5}, {10, -0.9}, {15, -1.4}}));
  const CrossoverResult e = find_crossovers(hand_delta({{0, 0.3}, {10, -0.1}, {20, 0.3}}));
  const double a_err = a.crossings.empty() ? INFINITY : std::abs(a.crossings[0].alpha_star - 8.125);
  const double b_err = b.crossings.empty() ? INFINITY : std::abs(b.crossings[0].alpha_star - 5.0);
  const double e_err = e.crossings.size() != 2 ? INFINITY
                                               : std::max(std::abs(e.crossings[0].alpha_star - 7.5),
                                                          std::abs(e.crossings[1].alpha_star - 12.5));
  v.note(fmt("8.125 err %.1e, grid zero err %.1e, two-crossing err %.1e, negative case %s", a_err,
             b_err, e_err, std::string(crossover_class_name(c.classification)).c_str()));
  if (a_err > 1e-12 || b_err > 1e-12 || e_err > 1e-12) v.fail("interpolated alpha* off");
  if (c.classification != CrossoverClass::AlwaysSlidePreferred) v.fail("negative case misclassified");
  if (!std::isinf(c.ordering_key()) || c.ordering_key() > 0) v.fail("negative case key is not -inf");
  return v;
}

// 9 ------------------------------------------------------------------------

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Writes the same files as the sweep command into dir.
void write_run_dir(const fs::path& dir, const RunConfig& c) {
  fs::remove_all(dir);
  fs::create_directories(dir / "trials");
  SweepOptions opt;
  opt.workers = c.workers;
  opt.cot = c.cot;
  opt.on_trial = [&](const TrialRecord& rec, const TrialLog& log) {
    std::ofstream out(dir / "trials" / ("trial_" + rec.trial_id + ".csv"), std::ios::binary);
    write_trial_csv(out, log);
  };
  std::vector<CoTCurve> curves;
  std::vector<TrialRecord> trials;
  for (ControlMode m : {ControlMode::Walking, ControlMode::Sliding}) {
    SweepResult r = run_sweep(c.trial, c.grid, m, opt);
    curves.insert(curves.end(), r.curves.begin(), r.curves.end());
    trials.insert(trials.end(), r.trials.begin(), r.trials.end());
  }
  std::ostringstream cs, ts;
  write_curves_csv(cs, curves);
  write_trials_csv(ts, trials);
  write_text_file((dir / "curves.csv").string(), cs.str());
  write_text_file((dir / "trials.csv").string(), ts.str());
  write_text_file((dir / "manifest.cfg").string(), serialize_config(c));
}

Verdict determinism_and_replay() {
  Verdict v;
  RunConfig c = load_config_text(
      "[run]\nseed = 7\n[sweep]\nslopes = 0, 15, 30\nspeeds = 0.1, 0.3\nfrictions = 0.4, 0.8\n"
      "repetitions = 2\n");
  c.sync_seed();
  const fs::path root = fs::temp_directory_path() / fmt("cot_atlas_acceptance_%d", static_cast<int>(::getpid()));
  c.workers = 1;
  write_run_dir(root / "a", c);
  c.workers = 3;  // scheduling must not matter
  write_run_dir(root / "b", c);

  std::size_t files = 0, differing = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "a")) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), root / "a");
    if (rel == "manifest.cfg") continue;  // records the worker count
    ++files;
    const fs::path other = root / "b" / rel;
    if (!fs::exists(other) || read_all(e.path()) != read_all(other)) ++differing;
  }
  std::size_t files_b = 0;
  for (const auto& e : fs::recursive_directory_iterator(root / "b")) files_b += e.is_regular_file();
  fs::remove_all(root);
  if (differing > 0 || files_b != files + 1) v.fail(fmt("%zu of %zu files differ", differing, files));

  double worst = 0.0;
  for (double alpha : {0.0, 10.0, 20.0, 30.0}) {
    TrialConfig t;
    t.terrain = TerrainSpec::make(alpha, 0.6);
    t.seed = 100 + static_cast<std::uint64_t>(alpha);
    const TrialLog log = simulate_trial(t);
    std::ostringstream out;
    export_external_log(out, log);
    std::istringstream in(out.str());
    const TrialLog ext = ingest_external_log(in, sidecar_for(log));
    CoTOptions cart;
    cart.path = SignalPath::Cartesian;
    cart.joints = JointSelection::Active;
    const double internal = cot_for_trial(log, t.robot, t.terrain, cart).cot;
    const double replay = cot_for_trial(ext, robot_for(ext, t.robot), terrain_for(ext)).cot;
    worst = std::max(worst, std::abs(replay - internal));
  }
  v.note(fmt("%zu run files byte-identical across worker counts; export/ingest max CoT diff %.2e",
             files - differing, worst));
  if (worst > 1e-9) v.fail("round trip changes CoT by more than 1e-9");
  return v;
}

// 10 -----------------------------------------------------------------------

Verdict statistics() {
  Verdict v;
  const DefaultSweep& d = default_sweep();
  int points = 0, with_spread = 0, single = 0, absent = 0;
  for (const SweepResult* r : {&d.walk, &d.slide}) {
    for (const auto& c : r->curves) {
      for (const auto& p : c.points) {
        ++points;
        if (p.n_ok + p.n_fail != 10) {
          v.fail(fmt("%s %.2f/%.2f at %.0f deg: %d + %d trials", std::string(mode_name(c.mode)).c_str(),
                     c.speed, c.mu_s, p.alpha_deg, p.n_ok, p.n_fail));
        }
        if (!p.present) {
          ++absent;
        } else if (p.n_ok < 2) {
          ++single;
        } else if (p.std > 0.0) {
          ++with_spread;
        } else {
          v.fail(fmt("zero std at %.0f deg with %d successes", p.alpha_deg, p.n_ok));
        }
      }
    }
  }
  v.note(fmt("%d grid points, 10 trials each; std > 0 at %d; %d with a single success; %d absent "
             "(every trial failed)",
             points, with_spread, single, absent));
  if (single > 0) v.fail("points with one success have no spread");
  return v;
}

}  // namespace

int main() {
  report(1, "kinematics oracle", kinematics);
  report(2, "energetics exactness", energetics);
  report(3, "Coulomb slider oracle", coulomb_slider);
  report(4, "dual-path CoT consistency", dual_path);
  report(5, "sliding CoT trend", slide_trend);
  report(6, "walking CoT trend", walk_trend);
  report(7, "crossover structure", crossover_structure);
  report(8, "crossover math oracle", crossover_math);
  report(9, "determinism and replay", determinism_and_replay);
  report(10, "statistical protocol", statistics);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
