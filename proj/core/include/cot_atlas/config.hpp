#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cot_atlas/energetics.hpp"
#include "cot_atlas/sweep.hpp"
#include "cot_atlas/trial.hpp"

namespace cot_atlas {

// One `key = value` entry; key is `section.name`.
struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
  int column = 0;  // of the value
};

// Sectioned key/value text: `[section]` headers, `key = value` lines, dotted
// keys, `#` or `;` comments. Throws ParseError.
std::vector<KeyValue> parse_key_values(std::string_view text);

enum class RunMode { Walk, Slide, Both };
std::string_view run_mode_name(RunMode m);
RunMode parse_run_mode(std::string_view s);  // throws InvariantViolation

struct RunConfig {
  TrialConfig trial;  // base settings; sweeps override terrain, speed and seed
  SweepGrid grid;
  RunMode mode = RunMode::Slide;
  std::uint64_t seed = 0;
  std::string output_dir = "run";
  unsigned workers = 0;
  bool trial_logs = false;  // per-trial CSVs in sweeps
  bool allow_extended_ranges = false;
  CoTOptions cot;

  // Also pushes seed into the grid and trial.
  void validate() const;
  void sync_seed();
};

// Unknown keys throw UnknownKey, malformed values ParseError, range problems
// InvariantViolation (unless run.allow_extended_ranges). Keys under
// [manifest] are informational and ignored.
RunConfig load_config_text(std::string_view text, bool allow_extended_ranges = false);
RunConfig load_config(const std::string& path, bool allow_extended_ranges = false);

// Every field, 17 significant digits; load_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

// Numbers as written by every file in this library.
std::string format_double(double v);
double parse_double(std::string_view s);  // throws InvariantViolation on garbage

std::string_view library_version();

std::string read_text_file(const std::string& path);  // throws Io
void write_text_file(const std::string& path, std::string_view text);

}  // namespace cot_atlas
