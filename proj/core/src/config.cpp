#include "cot_atlas/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cot_atlas/error.hpp"

namespace cot_atlas {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::InvariantViolation, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::string_view library_version() { return COT_ATLAS_VERSION; }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path);
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  for (char c : k) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::vector<KeyValue> parse_key_values(std::string_view text) {
  std::vector<KeyValue> out;
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    // Strip comments that start a line or follow whitespace.
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if ((raw[i] == '#' || raw[i] == ';') && (i == 0 || is_space(raw[i - 1]))) {
        raw = raw.substr(0, i);
        break;
      }
    }
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const int indent = static_cast<int>(raw.find_first_not_of(" \t")) + 1;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, indent, "section header without ']'");
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!valid_key(name) || name.find('.') != std::string_view::npos) {
        throw ParseError(line_no, indent + 1, "bad section name");
      }
      section = std::string(name);
      continue;
    }

    const std::size_t eq = raw.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, indent, "expected 'key = value'");
    const std::string_view key = trim(raw.substr(0, eq));
    if (!valid_key(key)) throw ParseError(line_no, indent, "bad key '" + std::string(key) + "'");
    const std::string_view value_raw = raw.substr(eq + 1);
    const std::string_view value = trim(value_raw);
    const std::size_t lead = value_raw.find_first_not_of(" \t");
    const int column = static_cast<int>(eq + 2 + (lead == std::string_view::npos ? 0 : lead));

    KeyValue kv;
    kv.key = section.empty() ? std::string(key) : section + "." + std::string(key);
    kv.value = std::string(value);
    kv.line = line_no;
    kv.column = column;
    out.push_back(std::move(kv));
  }
  return out;
}

std::string_view run_mode_name(RunMode m) {
  switch (m) {
    case RunMode::Walk: return "walk";
    case RunMode::Slide: return "slide";
    case RunMode::Both: return "both";
  }
  return "?";
}

RunMode parse_run_mode(std::string_view s) {
  if (s == "walk") return RunMode::Walk;
  if (s == "slide") return RunMode::Slide;
  if (s == "both") return RunMode::Both;
  throw Error(ErrorKind::InvariantViolation, "mode must be walk, slide or both");
}

void RunConfig::sync_seed() {
  grid.master_seed = seed;
  trial.seed = seed;
}

void RunConfig::validate() const {
  trial.validate(allow_extended_ranges);
  grid.validate();
  if (!allow_extended_ranges) {
    for (double a : grid.slopes) TerrainSpec::make(a, 0.6, trial.terrain.g).validate(false);
    for (double mu : grid.frictions) TerrainSpec::make(0.0, mu, trial.terrain.g).validate(false);
  }
  if (output_dir.empty()) throw Error(ErrorKind::InvariantViolation, "run.output_dir is empty");
}

namespace {

struct Binding {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

using Bindings = std::vector<std::pair<std::string, Binding>>;

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw Error(ErrorKind::InvariantViolation, "not a boolean: '" + s + "'");
}

std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorKind::InvariantViolation, "not an unsigned integer: '" + s + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string_view rest = s;
  while (true) {
    const std::size_t comma = rest.find(',');
    out.push_back(parse_double(trim(rest.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  return out;
}

template <typename F>
Binding num(F field) {
  return {[field](RunConfig& c, const std::string& s) { field(c) = parse_double(s); },
          [field](const RunConfig& c) { return format_double(field(const_cast<RunConfig&>(c))); }};
}

template <typename F>
Binding flag(F field) {
  return {[field](RunConfig& c, const std::string& s) { field(c) = parse_bool(s); },
          [field](const RunConfig& c) { return fmt_bool(field(const_cast<RunConfig&>(c))); }};
}

template <typename F>
Binding list(F field) {
  return {[field](RunConfig& c, const std::string& s) { field(c) = parse_list(s); },
          [field](const RunConfig& c) { return fmt_list(field(const_cast<RunConfig&>(c))); }};
}

// Leg geometry and home pose apply to all four legs.
void set_legs(RunConfig& c, const std::function<void(LegGeometry&)>& f) {
  for (auto& g : c.trial.robot.legs) f(g);
}

void set_home(RunConfig& c, double front_x, double hind_x, double z) {
  auto& home = c.trial.robot.slide_home;
  for (Leg leg : kAllLegs) {
    const auto& g = c.trial.robot.leg(leg);
    home[index(leg)] = FootPoint(is_front(leg) ? front_x : hind_x, g.side * g.hip_offset, z);
  }
}

const Bindings& bindings() {
  static const Bindings b = [] {
    Bindings v;
    auto add = [&v](std::string k, Binding bind) { v.emplace_back(std::move(k), std::move(bind)); };

    add("run.mode", {[](RunConfig& c, const std::string& s) { c.mode = parse_run_mode(s); },
                     [](const RunConfig& c) { return std::string(run_mode_name(c.mode)); }});
    add("run.seed", {[](RunConfig& c, const std::string& s) { c.seed = parse_u64(s); },
                     [](const RunConfig& c) { return std::to_string(c.seed); }});
    add("run.output_dir", {[](RunConfig& c, const std::string& s) { c.output_dir = s; },
                           [](const RunConfig& c) { return c.output_dir; }});
    add("run.workers",
        {[](RunConfig& c, const std::string& s) { c.workers = static_cast<unsigned>(parse_u64(s)); },
         [](const RunConfig& c) { return std::to_string(c.workers); }});
    add("run.trial_logs", flag([](RunConfig& c) -> bool& { return c.trial_logs; }));
    add("run.allow_extended_ranges",
        flag([](RunConfig& c) -> bool& { return c.allow_extended_ranges; }));
    add("run.joints",
        {[](RunConfig& c, const std::string& s) {
           if (s == "all") c.cot.joints = JointSelection::All;
           else if (s == "active") c.cot.joints = JointSelection::Active;
           else throw Error(ErrorKind::InvariantViolation, "joints must be all or active");
         },
         [](const RunConfig& c) {
           return std::string(c.cot.joints == JointSelection::All ? "all" : "active");
         }});
    add("run.signal_path",
        {[](RunConfig& c, const std::string& s) {
           if (s == "joint") c.cot.path = SignalPath::Joint;
           else if (s == "cartesian") c.cot.path = SignalPath::Cartesian;
           else throw Error(ErrorKind::InvariantViolation, "signal_path must be joint or cartesian");
         },
         [](const RunConfig& c) {
           return std::string(c.cot.path == SignalPath::Joint ? "joint" : "cartesian");
         }});
    add("run.tau_free", flag([](RunConfig& c) -> bool& { return c.cot.tau_free; }));

    add("robot.mass", num([](RunConfig& c) -> double& { return c.trial.robot.mass; }));
    add("robot.patch_length", num([](RunConfig& c) -> double& { return c.trial.robot.patch_length; }));
    add("robot.patch_width", num([](RunConfig& c) -> double& { return c.trial.robot.patch_width; }));
    add("robot.hip_x", num([](RunConfig& c) -> double& { return c.trial.robot.hip_x; }));
    add("robot.hip_y", num([](RunConfig& c) -> double& { return c.trial.robot.hip_y; }));
    add("robot.slide_hip_height",
        num([](RunConfig& c) -> double& { return c.trial.robot.slide_hip_height; }));
    add("robot.walk_height", num([](RunConfig& c) -> double& { return c.trial.robot.walk_height; }));
    add("robot.joint_inertia",
        num([](RunConfig& c) -> double& { return c.trial.robot.joint_inertia; }));
    add("robot.thigh_mass", num([](RunConfig& c) -> double& { return c.trial.robot.thigh_mass; }));
    add("robot.shank_mass", num([](RunConfig& c) -> double& { return c.trial.robot.shank_mass; }));
    add("robot.slider_limb_inertia",
        flag([](RunConfig& c) -> bool& { return c.trial.robot.slider_limb_inertia; }));
    add("robot.hip_offset",
        {[](RunConfig& c, const std::string& s) {
           const double x = parse_double(s);
           const auto& h = c.trial.robot.slide_home;
           const FootPoint f = h[index(Leg::LF)], r = h[index(Leg::LH)];
           set_legs(c, [x](LegGeometry& g) { g.hip_offset = x; });
           set_home(c, f.x(), r.x(), f.z());
         },
         [](const RunConfig& c) { return format_double(c.trial.robot.legs[0].hip_offset); }});
    add("robot.l_thigh",
        {[](RunConfig& c, const std::string& s) {
           const double x = parse_double(s);
           set_legs(c, [x](LegGeometry& g) { g.l_thigh = x; });
         },
         [](const RunConfig& c) { return format_double(c.trial.robot.legs[0].l_thigh); }});
    add("robot.l_shank",
        {[](RunConfig& c, const std::string& s) {
           const double x = parse_double(s);
           set_legs(c, [x](LegGeometry& g) { g.l_shank = x; });
         },
         [](const RunConfig& c) { return format_double(c.trial.robot.legs[0].l_shank); }});
    add("robot.knee",
        {[](RunConfig& c, const std::string& s) {
           KneeBranch k;
           if (s == "back") k = KneeBranch::KneeBack;
           else if (s == "forward") k = KneeBranch::KneeForward;
           else throw Error(ErrorKind::InvariantViolation, "knee must be back or forward");
           set_legs(c, [k](LegGeometry& g) { g.knee_branch = k; });
         },
         [](const RunConfig& c) {
           return std::string(c.trial.robot.legs[0].knee_branch == KneeBranch::KneeBack ? "back"
                                                                                        : "forward");
         }});
    auto home_binding = [](int which) {
      return Binding{[which](RunConfig& c, const std::string& s) {
                       const auto& h = c.trial.robot.slide_home;
                       double fx = h[index(Leg::LF)].x(), hx = h[index(Leg::LH)].x(),
                              z = h[index(Leg::LF)].z();
                       (which == 0 ? fx : which == 1 ? hx : z) = parse_double(s);
                       set_home(c, fx, hx, z);
                     },
                     [which](const RunConfig& c) {
                       const auto& h = c.trial.robot.slide_home;
                       return format_double(which == 0   ? h[index(Leg::LF)].x()
                                            : which == 1 ? h[index(Leg::LH)].x()
                                                         : h[index(Leg::LF)].z());
                     }};
    };
    add("robot.home_front_x", home_binding(0));
    add("robot.home_hind_x", home_binding(1));
    add("robot.home_z", home_binding(2));

    add("terrain.alpha_deg", num([](RunConfig& c) -> double& { return c.trial.terrain.alpha_deg; }));
    add("terrain.mu_s", num([](RunConfig& c) -> double& { return c.trial.terrain.mu_s; }));
    add("terrain.mu_d", num([](RunConfig& c) -> double& { return c.trial.terrain.mu_d; }));
    add("terrain.mu_d_override",
        flag([](RunConfig& c) -> bool& { return c.trial.terrain.mu_d_override; }));
    add("terrain.g", num([](RunConfig& c) -> double& { return c.trial.terrain.g; }));

    add("contact.k_n", num([](RunConfig& c) -> double& { return c.trial.contact.k_n; }));
    add("contact.d_n", num([](RunConfig& c) -> double& { return c.trial.contact.d_n; }));
    add("contact.v_stick", num([](RunConfig& c) -> double& { return c.trial.contact.v_stick; }));
    add("contact.foot_mu_s", num([](RunConfig& c) -> double& { return c.trial.contact.foot_mu_s; }));

    add("slide.f", num([](RunConfig& c) -> double& { return c.trial.slide.f; }));
    add("slide.f_s", num([](RunConfig& c) -> double& { return c.trial.slide.f_s; }));
    add("slide.l_swing", num([](RunConfig& c) -> double& { return c.trial.slide.l_swing; }));
    add("slide.l_plus", num([](RunConfig& c) -> double& { return c.trial.slide.l_plus; }));
    add("slide.h_swing", num([](RunConfig& c) -> double& { return c.trial.slide.h_swing; }));
    add("slide.z0", num([](RunConfig& c) -> double& { return c.trial.slide.z0; }));
    add("slide.v", num([](RunConfig& c) -> double& { return c.trial.slide.v; }));
    add("slide.alpha_filter", num([](RunConfig& c) -> double& { return c.trial.slide.alpha_filter; }));
    add("slide.normalize_amplitude",
        flag([](RunConfig& c) -> bool& { return c.trial.slide.normalize_amplitude; }));

    const char* joints[] = {"haa", "hfe", "kfe"};
    for (int j = 0; j < 3; ++j) {
      add(std::string("gains.k_") + joints[j],
          num([j](RunConfig& c) -> double& { return c.trial.gains.k_q[j]; }));
    }
    for (int j = 0; j < 3; ++j) {
      add(std::string("gains.d_") + joints[j],
          num([j](RunConfig& c) -> double& { return c.trial.gains.d_q[j]; }));
    }
    add("gains.tau_max", num([](RunConfig& c) -> double& { return c.trial.tau_max; }));

    add("gait.duty_factor", num([](RunConfig& c) -> double& { return c.trial.gait.duty_factor; }));
    add("gait.step_length", num([](RunConfig& c) -> double& { return c.trial.gait.step_length; }));
    add("gait.step_height", num([](RunConfig& c) -> double& { return c.trial.gait.step_height; }));
    add("gait.cycle_time", num([](RunConfig& c) -> double& { return c.trial.gait.cycle_time; }));

    add("trial.id", {[](RunConfig& c, const std::string& s) { c.trial.trial_id = s; },
                     [](const RunConfig& c) { return c.trial.trial_id; }});
    add("trial.walk_speed", num([](RunConfig& c) -> double& { return c.trial.walk_speed; }));
    add("trial.ramp_length", num([](RunConfig& c) -> double& { return c.trial.ramp_length; }));
    add("trial.timeout", num([](RunConfig& c) -> double& { return c.trial.timeout; }));
    add("trial.settle_time", num([](RunConfig& c) -> double& { return c.trial.settle_time; }));
    add("trial.physics_dt", num([](RunConfig& c) -> double& { return c.trial.physics_dt; }));
    add("trial.jitter", flag([](RunConfig& c) -> bool& { return c.trial.jitter; }));
    add("trial.jitter_position",
        num([](RunConfig& c) -> double& { return c.trial.jitter_position; }));
    add("trial.jitter_phase", num([](RunConfig& c) -> double& { return c.trial.jitter_phase; }));

    add("sweep.slopes", list([](RunConfig& c) -> std::vector<double>& { return c.grid.slopes; }));
    add("sweep.speeds", list([](RunConfig& c) -> std::vector<double>& { return c.grid.speeds; }));
    add("sweep.frictions",
        list([](RunConfig& c) -> std::vector<double>& { return c.grid.frictions; }));
    add("sweep.repetitions",
        {[](RunConfig& c, const std::string& s) {
           c.grid.repetitions = static_cast<int>(parse_u64(s));
         },
         [](const RunConfig& c) { return std::to_string(c.grid.repetitions); }});
    return v;
  }();
  return b;
}

const Binding* find_binding(const std::string& key) {
  for (const auto& [k, b] : bindings()) {
    if (k == key) return &b;
  }
  return nullptr;
}

}  // namespace

RunConfig load_config_text(std::string_view text, bool allow_extended_ranges) {
  RunConfig c;
  std::set<std::string> seen;
  for (const KeyValue& kv : parse_key_values(text)) {
    if (kv.key.starts_with("manifest.")) continue;
    const Binding* b = find_binding(kv.key);
    if (!b) {
      throw Error(ErrorKind::UnknownKey,
                  "line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
    }
    if (!seen.insert(kv.key).second) {
      throw ParseError(kv.line, 1, "duplicate key '" + kv.key + "'");
    }
    try {
      b->set(c, kv.value);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvariantViolation) throw;
      throw ParseError(kv.line, kv.column, kv.key + ": " + e.what());
    }
  }
  if (!seen.contains("terrain.mu_d")) {
    c.trial.terrain.mu_d = kDynamicFrictionRatio * c.trial.terrain.mu_s;
  }
  if (allow_extended_ranges) c.allow_extended_ranges = true;
  c.sync_seed();
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path, bool allow_extended_ranges) {
  return load_config_text(read_text_file(path), allow_extended_ranges);
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& [key, b] : bindings()) {
    const std::size_t dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + b.get(config) + "\n";
  }
  return out;
}

}  // namespace cot_atlas
