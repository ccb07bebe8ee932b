#include "cot_atlas/trial_log_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "cot_atlas/config.hpp"
#include "cot_atlas/energetics.hpp"
#include "cot_atlas/error.hpp"

namespace cot_atlas {

void TrialLog::validate() const {
  if (rows.size() < 2) throw Error(ErrorKind::SchemaError, "log needs at least two rows");
  const double step = rows[1].t - rows[0].t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const LogRow& r = rows[i];
    bool finite = std::isfinite(r.t) && std::isfinite(r.cmd_speed) && r.base.allFinite() &&
                  std::isfinite(r.slip);
    for (const auto& l : r.legs) {
      finite = finite && l.q.allFinite() && l.qd.allFinite() && l.tau.allFinite() &&
               l.force.allFinite() && l.foot_vel.allFinite();
    }
    if (!finite) throw Error(ErrorKind::SchemaError, "non-finite value in row " + std::to_string(i));
    if (i > 0) {
      const double dt = r.t - rows[i - 1].t;
      if (!(dt > 0.0)) {
        throw Error(ErrorKind::NonMonotoneTime, "t does not increase at row " + std::to_string(i));
      }
      if (meta.provenance == Provenance::Internal && std::abs(dt - step) > 1e-9 * (1.0 + step)) {
        throw Error(ErrorKind::SchemaError, "non-uniform step at row " + std::to_string(i));
      }
    }
  }
}

namespace {

const char* kJointNames[] = {"haa", "hfe", "kfe"};
const char* kAxes[] = {"x", "y", "z"};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> trial_header() {
  std::vector<std::string> h = {"t", "cmd_speed", "base_x", "base_y", "base_z", "slip"};
  for (Leg leg : kAllLegs) {
    const std::string p = std::string(leg_name(leg)) + "_";
    for (auto* j : kJointNames) h.push_back(p + "q_" + j);
    for (auto* j : kJointNames) h.push_back(p + "qd_" + j);
    for (auto* j : kJointNames) h.push_back(p + "tau_" + j);
    for (auto* a : kAxes) h.push_back(p + "f" + a);
    for (auto* a : kAxes) h.push_back(p + "v" + a);
    h.push_back(p + "contact");
    h.push_back(p + "saturated");
  }
  return h;
}

std::vector<std::string> external_header() {
  std::vector<std::string> h = {"t"};
  for (Leg leg : {Leg::LF, Leg::RF}) {
    const std::string p = std::string(leg_name(leg)) + "_";
    for (auto* a : kAxes) h.push_back(p + "f" + a);
    for (auto* a : kAxes) h.push_back(p + "v" + a);
    for (auto* j : kJointNames) h.push_back(p + "q_" + j);
  }
  for (auto* a : kAxes) h.push_back(std::string("base_") + a);
  return h;
}

void write_row(std::ostream& out, const std::vector<double>& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_double(values[i]);
  }
  line += '\n';
  out << line;
}

void write_header(std::ostream& out, const std::vector<std::string>& h) {
  std::string line;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) line += ',';
    line += h[i];
  }
  out << line << '\n';
}

std::vector<double> parse_numbers(const std::vector<std::string>& cells, std::size_t expected,
                                  std::size_t line_no) {
  if (cells.size() != expected) {
    throw Error(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": " +
                                            std::to_string(cells.size()) + " columns, expected " +
                                            std::to_string(expected));
  }
  std::vector<double> v(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    try {
      v[i] = parse_double(cells[i]);
    } catch (const Error&) {
      throw Error(ErrorKind::SchemaError,
                  "line " + std::to_string(line_no) + ": bad number '" + cells[i] + "'");
    }
  }
  return v;
}

void expect_header(const std::vector<std::string>& got, const std::vector<std::string>& want) {
  if (got != want) {
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (i >= got.size() || got[i] != want[i]) {
        throw Error(ErrorKind::SchemaError,
                    "header column " + std::to_string(i + 1) + ": expected '" + want[i] + "'");
      }
    }
    throw Error(ErrorKind::SchemaError, "header has extra columns");
  }
}

ControlMode parse_mode(const std::string& s) {
  if (s == "walk") return ControlMode::Walking;
  if (s == "slide") return ControlMode::Sliding;
  throw Error(ErrorKind::SchemaError, "mode must be walk or slide");
}

}  // namespace

void write_trial_csv(std::ostream& out, const TrialLog& log) {
  const auto& m = log.meta;
  out << "# trial_id = " << m.trial_id << '\n'
      << "# mode = " << mode_name(m.mode) << '\n'
      << "# provenance = " << (m.provenance == Provenance::Internal ? "internal" : "external") << '\n'
      << "# alpha_deg = " << format_double(m.alpha_deg) << '\n'
      << "# mu_s = " << format_double(m.mu_s) << '\n'
      << "# mu_d = " << format_double(m.mu_d) << '\n'
      << "# gravity = " << format_double(m.gravity) << '\n'
      << "# mass = " << format_double(m.mass) << '\n'
      << "# speed = " << format_double(m.speed) << '\n'
      << "# seed = " << m.seed << '\n';
  write_header(out, trial_header());
  std::vector<double> v;
  for (const LogRow& r : log.rows) {
    v.assign({r.t, r.cmd_speed, r.base.x(), r.base.y(), r.base.z(), r.slip});
    for (const auto& l : r.legs) {
      for (int j = 0; j < 3; ++j) v.push_back(l.q[j]);
      for (int j = 0; j < 3; ++j) v.push_back(l.qd[j]);
      for (int j = 0; j < 3; ++j) v.push_back(l.tau[j]);
      for (int j = 0; j < 3; ++j) v.push_back(l.force[j]);
      for (int j = 0; j < 3; ++j) v.push_back(l.foot_vel[j]);
      v.push_back(l.contact ? 1.0 : 0.0);
      v.push_back(static_cast<double>(l.saturated));
    }
    write_row(out, v);
  }
}

TrialLog read_trial_csv(std::istream& in) {
  TrialLog log;
  std::map<std::string, std::string> meta;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.starts_with("#")) {
      const auto kvs = parse_key_values(line.substr(1));
      for (const auto& kv : kvs) meta[kv.key] = kv.value;
      continue;
    }
    header = split_csv(line);
    break;
  }
  const auto want = trial_header();
  expect_header(header, want);

  auto need = [&](const char* k) -> const std::string& {
    auto it = meta.find(k);
    if (it == meta.end()) throw Error(ErrorKind::SchemaError, std::string("missing metadata ") + k);
    return it->second;
  };
  auto num = [&](const char* k) {
    try {
      return parse_double(need(k));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::SchemaError) throw;
      throw Error(ErrorKind::SchemaError, std::string("bad metadata ") + k);
    }
  };
  log.meta.trial_id = need("trial_id");
  log.meta.mode = parse_mode(need("mode"));
  log.meta.provenance = need("provenance") == "external" ? Provenance::External : Provenance::Internal;
  log.meta.alpha_deg = num("alpha_deg");
  log.meta.mu_s = num("mu_s");
  log.meta.mu_d = num("mu_d");
  log.meta.gravity = num("gravity");
  log.meta.mass = num("mass");
  log.meta.speed = num("speed");
  log.meta.seed = std::stoull(need("seed"));

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto v = parse_numbers(split_csv(line), want.size(), line_no);
    LogRow r;
    std::size_t c = 0;
    r.t = v[c++];
    r.cmd_speed = v[c++];
    r.base = Vec3(v[c], v[c + 1], v[c + 2]);
    c += 3;
    r.slip = v[c++];
    for (auto& l : r.legs) {
      l.q = Vec3(v[c], v[c + 1], v[c + 2]);
      l.qd = Vec3(v[c + 3], v[c + 4], v[c + 5]);
      l.tau = Vec3(v[c + 6], v[c + 7], v[c + 8]);
      l.force = Vec3(v[c + 9], v[c + 10], v[c + 11]);
      l.foot_vel = Vec3(v[c + 12], v[c + 13], v[c + 14]);
      l.contact = v[c + 15] != 0.0;
      l.saturated = static_cast<int>(v[c + 16]);
      c += 17;
    }
    log.rows.push_back(r);
  }
  log.validate();
  return log;
}

ExternalSidecar parse_sidecar(const std::string& text) {
  std::map<std::string, KeyValue> kv;
  try {
    for (auto& e : parse_key_values(text)) kv[e.key] = e;
  } catch (const ParseError& e) {
    throw Error(ErrorKind::SchemaError, std::string("sidecar: ") + e.what());
  }
  ExternalSidecar s;
  auto num = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw Error(ErrorKind::SchemaError, std::string("sidecar missing ") + key);
    try {
      return parse_double(it->second.value);
    } catch (const Error&) {
      throw Error(ErrorKind::SchemaError, std::string("sidecar: bad number for ") + key);
    }
  };
  s.mass = num("mass");
  s.gravity = num("gravity");
  s.alpha_deg = num("alpha_deg");
  s.mu_s = num("mu_s");
  for (const auto& [k, e] : kv) {
    if (k == "trial_id") {
      s.trial_id = e.value;
    } else if (k != "mass" && k != "gravity" && k != "alpha_deg" && k != "mu_s") {
      throw Error(ErrorKind::SchemaError, "sidecar: unknown key '" + k + "'");
    }
  }
  return s;
}

std::string format_sidecar(const ExternalSidecar& s) {
  return "trial_id = " + s.trial_id + "\nmass = " + format_double(s.mass) +
         "\ngravity = " + format_double(s.gravity) + "\nalpha_deg = " + format_double(s.alpha_deg) +
         "\nmu_s = " + format_double(s.mu_s) + "\n";
}

TrialLog ingest_external_log(std::istream& in, const ExternalSidecar& sidecar) {
  if (!(sidecar.mass > 0.0) || !(sidecar.gravity > 0.0) || !std::isfinite(sidecar.mass) ||
      !std::isfinite(sidecar.gravity)) {
    throw Error(ErrorKind::UnitSanity, "sidecar mass and gravity must be positive");
  }
  const double force_limit = 100.0 * sidecar.mass * sidecar.gravity;

  TrialLog log;
  log.meta.trial_id = sidecar.trial_id;
  log.meta.mode = ControlMode::Sliding;
  log.meta.provenance = Provenance::External;
  log.meta.alpha_deg = sidecar.alpha_deg;
  log.meta.mu_s = sidecar.mu_s;
  log.meta.mu_d = kDynamicFrictionRatio * sidecar.mu_s;
  log.meta.gravity = sidecar.gravity;
  log.meta.mass = sidecar.mass;
  log.has_joint_signals = false;
  log.has_command = false;
  log.legs_present = {true, true, false, false};

  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw Error(ErrorKind::SchemaError, "empty external log");
  const auto want = external_header();
  expect_header(split_csv(line), want);

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto v = parse_numbers(split_csv(line), want.size(), line_no);
    for (double x : v) {
      if (!std::isfinite(x)) {
        throw Error(ErrorKind::UnitSanity, "line " + std::to_string(line_no) + ": non-finite value");
      }
    }
    LogRow r;
    r.t = v[0];
    std::size_t c = 1;
    for (Leg leg : {Leg::LF, Leg::RF}) {
      auto& l = r.legs[index(leg)];
      l.force = Vec3(v[c], v[c + 1], v[c + 2]);
      l.foot_vel = Vec3(v[c + 3], v[c + 4], v[c + 5]);
      l.q = Vec3(v[c + 6], v[c + 7], v[c + 8]);
      c += 9;
      if (l.force.norm() > force_limit) {
        throw Error(ErrorKind::UnitSanity, "line " + std::to_string(line_no) +
                                               ": foot force above 100 m g (units?)");
      }
    }
    r.base = Vec3(v[c], v[c + 1], v[c + 2]);
    if (!log.rows.empty() && !(r.t > log.rows.back().t)) {
      throw Error(ErrorKind::NonMonotoneTime, "t does not increase at line " + std::to_string(line_no));
    }
    log.rows.push_back(r);
  }
  log.validate();
  return log;
}

TrialLog ingest_external_log(const std::string& csv_path, const std::string& sidecar_path) {
  const ExternalSidecar sidecar = parse_sidecar(read_text_file(sidecar_path));
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + csv_path);
  return ingest_external_log(in, sidecar);
}

void export_external_log(std::ostream& out, const TrialLog& log) {
  const ActiveWindow w = active_window(log);
  write_header(out, external_header());
  std::vector<double> v;
  for (std::size_t i = w.first; i <= w.last; ++i) {
    const LogRow& r = log.rows[i];
    v.assign({r.t});
    for (Leg leg : {Leg::LF, Leg::RF}) {
      const auto& l = r.legs[index(leg)];
      for (int j = 0; j < 3; ++j) v.push_back(l.force[j]);
      for (int j = 0; j < 3; ++j) v.push_back(l.foot_vel[j]);
      for (int j = 0; j < 3; ++j) v.push_back(l.q[j]);
    }
    for (int j = 0; j < 3; ++j) v.push_back(r.base[j]);
    write_row(out, v);
  }
}

ExternalSidecar sidecar_for(const TrialLog& log) {
  ExternalSidecar s;
  s.trial_id = log.meta.trial_id;
  s.mass = log.meta.mass;
  s.gravity = log.meta.gravity;
  s.alpha_deg = log.meta.alpha_deg;
  s.mu_s = log.meta.mu_s;
  return s;
}

RobotSpec robot_for(const TrialLog& log, const RobotSpec& base) {
  RobotSpec r = base;
  r.mass = log.meta.mass;
  return r;
}

TerrainSpec terrain_for(const TrialLog& log) {
  TerrainSpec t = TerrainSpec::make(log.meta.alpha_deg, log.meta.mu_s, log.meta.gravity);
  return t;
}

}  // namespace cot_atlas
