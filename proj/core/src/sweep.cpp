#include "cot_atlas/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "cot_atlas/seeding.hpp"

namespace cot_atlas {

void SweepGrid::validate() const {
  if (slopes.empty() || speeds.empty() || frictions.empty() || repetitions < 1) {
    throw Error(ErrorKind::InvariantViolation,
                "sweep grid needs nonempty slopes, speeds, frictions and repetitions >= 1");
  }
  auto positive = [](const std::vector<double>& v) {
    for (double x : v) {
      if (!(x > 0.0)) return false;
    }
    return true;
  };
  if (!positive(speeds) || !positive(frictions)) {
    throw Error(ErrorKind::InvariantViolation, "sweep speeds and frictions must be positive");
  }
}

const std::vector<double>& SweepGrid::conditions(ControlMode mode) const {
  return mode == ControlMode::Walking ? speeds : frictions;
}

std::size_t SweepGrid::trial_count(ControlMode mode) const {
  return conditions(mode).size() * slopes.size() * static_cast<std::size_t>(repetitions);
}

AggregateResult aggregate(const std::vector<std::optional<double>>& values) {
  AggregateResult r;
  double sum = 0.0;
  for (const auto& v : values) {
    if (v) {
      ++r.n_ok;
      sum += *v;
    } else {
      ++r.n_fail;
    }
  }
  if (r.n_ok == 0) {
    throw Error(ErrorKind::AllTrialsFailed, std::to_string(r.n_fail) + " trials, none succeeded");
  }
  r.mean = sum / r.n_ok;
  if (r.n_ok > 1) {
    double ss = 0.0;
    for (const auto& v : values) {
      if (v) ss += (*v - r.mean) * (*v - r.mean);
    }
    r.std = std::sqrt(ss / (r.n_ok - 1));
  }
  return r;
}

const CurvePoint* CoTCurve::at(double alpha_deg) const {
  for (const auto& p : points) {
    if (p.alpha_deg == alpha_deg) return &p;
  }
  return nullptr;
}

std::uint64_t trial_seed(std::uint64_t master, ControlMode mode, double condition,
                         double alpha_deg, int rep) {
  return mix_seed(master, {static_cast<std::uint64_t>(mode), seed_part(condition),
                           seed_part(alpha_deg), static_cast<std::uint64_t>(rep)});
}

std::string trial_name(ControlMode mode, double condition, double alpha_deg, int rep) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s_%s%.2f_a%05.2f_r%02d", std::string(mode_name(mode)).c_str(),
                mode == ControlMode::Walking ? "v" : "mu", condition, alpha_deg, rep);
  return buf;
}

TrialConfig trial_config(const TrialConfig& base, const SweepGrid& grid, ControlMode mode,
                         double condition, double alpha_deg, int rep) {
  TrialConfig c = base;
  c.mode = mode;
  c.trial_id = trial_name(mode, condition, alpha_deg, rep);
  c.seed = trial_seed(grid.master_seed, mode, condition, alpha_deg, rep);
  if (mode == ControlMode::Walking) {
    c.walk_speed = condition;
    c.terrain = TerrainSpec::make(alpha_deg, base.contact.foot_static(base.terrain), base.terrain.g);
  } else {
    c.terrain = TerrainSpec::make(alpha_deg, condition, base.terrain.g);
  }
  return c;
}

unsigned resolve_workers(unsigned requested) {
  unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("COT_ATLAS_WORKERS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace {

TrialRecord run_one(const TrialConfig& config, const SweepOptions& options, ControlMode mode,
                    double condition, double alpha_deg, int rep) {
  TrialRecord rec;
  rec.trial_id = config.trial_id;
  rec.mode = mode;
  rec.condition = condition;
  rec.alpha_deg = alpha_deg;
  rec.rep = rep;
  rec.seed = config.seed;
  try {
    const TrialLog log = simulate_trial(config);
    rec.cot = cot_for_trial(log, config.robot, config.terrain, options.cot);
    rec.ok = true;
    if (options.on_trial) options.on_trial(rec, log);
  } catch (const Error& e) {
    rec.ok = false;
    rec.failure = e.kind();
    rec.message = e.what();
  }
  return rec;
}

}  // namespace

SweepResult run_sweep(const TrialConfig& base, const SweepGrid& grid, ControlMode mode,
                      const SweepOptions& options) {
  grid.validate();
  const auto& conds = grid.conditions(mode);
  const std::size_t n_slopes = grid.slopes.size();
  const std::size_t reps = static_cast<std::size_t>(grid.repetitions);
  const std::size_t total = grid.trial_count(mode);

  std::vector<TrialConfig> configs;
  configs.reserve(total);
  for (double cond : conds) {
    for (double alpha : grid.slopes) {
      for (int r = 0; r < grid.repetitions; ++r) {
        configs.push_back(trial_config(base, grid, mode, cond, alpha, r));
        configs.back().validate(true);
      }
    }
  }

  SweepResult out;
  out.trials.resize(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::size_t ci = i / (n_slopes * reps);
      const std::size_t si = (i / reps) % n_slopes;
      out.trials[i] = run_one(configs[i], options, mode, conds[ci], grid.slopes[si],
                              static_cast<int>(i % reps));
    }
  };

  const unsigned n_workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_workers(options.workers), total));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t ci = 0; ci < conds.size(); ++ci) {
    CoTCurve curve;
    curve.mode = mode;
    if (mode == ControlMode::Walking) {
      curve.speed = conds[ci];
      curve.mu_s = base.contact.foot_static(base.terrain);
    } else {
      curve.speed = base.slide.v;
      curve.mu_s = conds[ci];
    }
    for (std::size_t si = 0; si < n_slopes; ++si) {
      std::vector<std::optional<double>> values;
      for (std::size_t r = 0; r < reps; ++r) {
        const TrialRecord& rec = out.trials[(ci * n_slopes + si) * reps + r];
        values.push_back(rec.ok ? std::optional<double>(rec.cot.cot) : std::nullopt);
      }
      CurvePoint p;
      p.alpha_deg = grid.slopes[si];
      try {
        const AggregateResult a = aggregate(values);
        p.present = true;
        p.mean = a.mean;
        p.std = a.std;
        p.n_ok = a.n_ok;
        p.n_fail = a.n_fail;
      } catch (const Error&) {
        p.n_fail = static_cast<int>(values.size());
      }
      curve.points.push_back(p);
    }
    std::sort(curve.points.begin(), curve.points.end(),
              [](const CurvePoint& a, const CurvePoint& b) { return a.alpha_deg < b.alpha_deg; });
    out.curves.push_back(std::move(curve));
  }
  return out;
}

}  // namespace cot_atlas
