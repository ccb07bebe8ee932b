#include "cot_atlas/tables.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "cot_atlas/config.hpp"
#include "cot_atlas/error.hpp"

namespace cot_atlas {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  out.push_back(cell);
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += format_double(v[i]);
  }
  return s;
}

double cell_number(const std::string& s, std::size_t line_no) {
  try {
    return parse_double(s);
  } catch (const Error&) {
    throw Error(ErrorKind::SchemaError,
                "line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
}

void expect_header(std::istream& in, const std::string& want) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::SchemaError, "empty table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != want) throw Error(ErrorKind::SchemaError, "unexpected header: " + line);
}

const char* kCurvesHeader = "mode,speed,mu_s,alpha_deg,cot_mean,cot_std,n_ok,n_fail";
const char* kResultsHeader =
    "trial_id,mode,provenance,path,alpha_deg,mu_s,speed,energy_j,distance_m,cot,singular_rows";

}  // namespace

void write_curves_csv(std::ostream& out, const std::vector<CoTCurve>& curves) {
  out << kCurvesHeader << '\n';
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      out << mode_name(c.mode) << ',' << format_double(c.speed) << ',' << format_double(c.mu_s)
          << ',' << format_double(p.alpha_deg) << ','
          << (p.present ? format_double(p.mean) : "") << ','
          << (p.present ? format_double(p.std) : "") << ',' << p.n_ok << ',' << p.n_fail << '\n';
    }
  }
}

std::vector<CoTCurve> read_curves_csv(std::istream& in) {
  expect_header(in, kCurvesHeader);
  std::vector<CoTCurve> curves;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto c = split(line, ',');
    if (c.size() != 8) {
      throw Error(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": expected 8 columns");
    }
    ControlMode mode;
    if (c[0] == "walk") mode = ControlMode::Walking;
    else if (c[0] == "slide") mode = ControlMode::Sliding;
    else throw Error(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": bad mode");

    const double speed = cell_number(c[1], line_no);
    const double mu = cell_number(c[2], line_no);
    CurvePoint p;
    p.alpha_deg = cell_number(c[3], line_no);
    p.present = !c[4].empty();
    if (p.present) {
      p.mean = cell_number(c[4], line_no);
      p.std = cell_number(c[5], line_no);
    }
    p.n_ok = static_cast<int>(cell_number(c[6], line_no));
    p.n_fail = static_cast<int>(cell_number(c[7], line_no));

    if (curves.empty() || curves.back().mode != mode || curves.back().speed != speed ||
        curves.back().mu_s != mu) {
      CoTCurve curve;
      curve.mode = mode;
      curve.speed = speed;
      curve.mu_s = mu;
      curves.push_back(curve);
    }
    auto& pts = curves.back().points;
    if (!pts.empty() && !(p.alpha_deg > pts.back().alpha_deg)) {
      throw Error(ErrorKind::SchemaError,
                  "line " + std::to_string(line_no) + ": slopes must ascend within a curve");
    }
    pts.push_back(p);
  }
  return curves;
}

void write_crossovers_csv(std::ostream& out, const std::vector<CrossoverResult>& results) {
  out << "walk_speed,mu_s,classification,alpha_star_list,bracket_lo,bracket_hi\n";
  for (const auto& r : results) {
    std::vector<double> a, lo, hi;
    for (const auto& c : r.crossings) {
      a.push_back(c.alpha_star);
      lo.push_back(c.bracket_lo);
      hi.push_back(c.bracket_hi);
    }
    out << format_double(r.walk_speed) << ',' << format_double(r.mu_s) << ','
        << crossover_class_name(r.classification) << ',' << join_doubles(a) << ','
        << join_doubles(lo) << ',' << join_doubles(hi) << '\n';
  }
}

void write_ordering_report(std::ostream& out, const OrderingReport& report) {
  auto key = [](double k) {
    if (std::isinf(k)) return std::string(k < 0 ? "-inf" : "+inf");
    return format_double(k);
  };
  out << "table,fixed,varied,alpha_star_key\n";
  for (const auto& row : report.by_speed) {
    for (const auto& [mu, k] : row.keys) {
      out << "by_speed," << format_double(row.fixed) << ',' << format_double(mu) << ',' << key(k)
          << '\n';
    }
  }
  for (const auto& row : report.by_friction) {
    for (const auto& [v, k] : row.keys) {
      out << "by_friction," << format_double(row.fixed) << ',' << format_double(v) << ',' << key(k)
          << '\n';
    }
  }
  out << "flag,friction_monotone,," << (report.friction_monotone ? "true" : "false") << '\n';
  out << "flag,speed_anticipation,," << (report.speed_anticipation ? "true" : "false") << '\n';
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& trials) {
  out << "trial_id,mode,condition,alpha_deg,rep,seed,status,cot,energy_j,distance_m,error\n";
  for (const auto& t : trials) {
    out << t.trial_id << ',' << mode_name(t.mode) << ',' << format_double(t.condition) << ','
        << format_double(t.alpha_deg) << ',' << t.rep << ',' << t.seed << ','
        << (t.ok ? "ok" : "failed") << ',';
    if (t.ok) {
      out << format_double(t.cot.cot) << ',' << format_double(t.cot.energy) << ','
          << format_double(t.cot.distance) << ",\n";
    } else {
      out << ",,," << (t.failure ? error_kind_name(*t.failure) : "") << '\n';
    }
  }
}

void write_cot_results_header(std::ostream& out) { out << kResultsHeader << '\n'; }

void write_cot_result_row(std::ostream& out, const std::string& trial_id, const CoTResult& r) {
  out << trial_id << ',' << mode_name(r.mode) << ','
      << (r.provenance == Provenance::Internal ? "internal" : "external") << ','
      << (r.path == SignalPath::Joint ? "joint" : "cartesian") << ',' << format_double(r.alpha_deg)
      << ',' << format_double(r.mu_s) << ',' << format_double(r.speed) << ','
      << format_double(r.energy) << ',' << format_double(r.distance) << ',' << format_double(r.cot)
      << ',' << r.singular_rows << '\n';
}

std::vector<CoTResultRow> read_cot_results_csv(std::istream& in) {
  expect_header(in, kResultsHeader);
  std::vector<CoTResultRow> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto c = split(line, ',');
    if (c.size() != 11) {
      throw Error(ErrorKind::SchemaError, "line " + std::to_string(line_no) + ": expected 11 columns");
    }
    CoTResultRow row;
    row.trial_id = c[0];
    auto& r = row.result;
    r.mode = c[1] == "walk" ? ControlMode::Walking : ControlMode::Sliding;
    r.provenance = c[2] == "external" ? Provenance::External : Provenance::Internal;
    r.path = c[3] == "cartesian" ? SignalPath::Cartesian : SignalPath::Joint;
    r.alpha_deg = cell_number(c[4], line_no);
    r.mu_s = cell_number(c[5], line_no);
    r.speed = cell_number(c[6], line_no);
    r.energy = cell_number(c[7], line_no);
    r.distance = cell_number(c[8], line_no);
    r.cot = cell_number(c[9], line_no);
    r.singular_rows = static_cast<std::size_t>(cell_number(c[10], line_no));
    rows.push_back(row);
  }
  return rows;
}

namespace {

void write_curve_points(std::ostream& out, const std::vector<CoTCurve>& curves, ControlMode mode) {
  for (const auto& c : curves) {
    if (c.mode != mode) continue;
    for (const auto& p : c.points) {
      if (!p.present) continue;
      out << format_double(mode == ControlMode::Walking ? c.speed : c.mu_s) << ','
          << format_double(p.alpha_deg) << ',' << format_double(p.mean) << ','
          << format_double(p.std) << ',' << p.n_ok << ',' << p.n_fail << '\n';
    }
  }
}

}  // namespace

void write_walking_plot(std::ostream& out, const std::vector<CoTCurve>& curves) {
  out << "speed,alpha_deg,cot_mean,cot_std,n_ok,n_fail\n";
  write_curve_points(out, curves, ControlMode::Walking);
}

void write_sliding_plot(std::ostream& out, const std::vector<CoTCurve>& curves) {
  out << "mu_s,alpha_deg,cot_mean,cot_std,n_ok,n_fail\n";
  write_curve_points(out, curves, ControlMode::Sliding);
}

void write_delta_plot(std::ostream& out, const std::vector<DeltaCurve>& deltas) {
  out << "walk_speed,mu_s,alpha_deg,delta_cot,delta_std\n";
  for (const auto& d : deltas) {
    for (const auto& p : d.points) {
      out << format_double(d.walk_speed) << ',' << format_double(d.mu_s) << ','
          << format_double(p.alpha_deg) << ',' << format_double(p.delta) << ','
          << format_double(p.std) << '\n';
    }
  }
}

void write_simulator_plot(std::ostream& out, const std::vector<CoTCurve>& curves,
                          const std::vector<CoTResultRow>& external) {
  out << "source,alpha_deg,mu_s,cot,cot_std,n\n";
  std::map<std::pair<double, double>, std::vector<double>> ext;
  for (const auto& row : external) {
    if (row.result.provenance != Provenance::External) continue;
    ext[{row.result.alpha_deg, row.result.mu_s}].push_back(row.result.cot);
  }
  for (const auto& [key, values] : ext) {
    const auto [alpha, mu] = key;
    for (const auto& c : curves) {
      if (c.mode != ControlMode::Sliding || c.mu_s != mu) continue;
      if (const CurvePoint* p = c.at(alpha); p && p->present) {
        out << "internal," << format_double(alpha) << ',' << format_double(mu) << ','
            << format_double(p->mean) << ',' << format_double(p->std) << ',' << p->n_ok << '\n';
      }
    }
    std::vector<std::optional<double>> vals(values.begin(), values.end());
    const AggregateResult a = aggregate(vals);
    out << "external," << format_double(alpha) << ',' << format_double(mu) << ','
        << format_double(a.mean) << ',' << format_double(a.std) << ',' << a.n_ok << '\n';
  }
}

}  // namespace cot_atlas
