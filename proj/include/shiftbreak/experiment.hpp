#pragma once

// Experiment runner: configuration, oracle construction, algorithm
// dispatch and report emission for the command line tool.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftbreak/identity.hpp"
#include "shiftbreak/recovery.hpp"

namespace shiftbreak {

using Json = nlohmann::ordered_json;

enum class Command { Recover, Identity, Lab, Bench };
enum class OutputFormat { Json, Csv, Table };

inline const std::vector<std::string> kAlgorithms = {
    "interpolation", "zero_call+narrow", "smooth+narrow", "randomized", "large_e"};

struct ExperimentConfig {
  Command command = Command::Recover;
  std::uint64_t p = 0;
  std::uint64_t e = 0;
  std::string s = "random";  // integer or "random"
  std::string t;             // empty when absent
  std::string algorithm = "zero_call+narrow";
  std::string variant = "known_t";
  HMode mode = HMode::Exact;
  double epsilon = 0.05;
  std::optional<double> delta;
  double c0 = 1.0;
  std::optional<std::uint64_t> window_cap;
  std::optional<std::uint64_t> max_rounds;
  std::optional<std::uint64_t> seed;
  std::uint64_t trials = 1;
  OutputFormat output = OutputFormat::Json;
  std::string lemma;
  std::vector<Json> grid;
  std::optional<std::uint64_t> p_max;
  unsigned threads = 0;  // 0 picks the hardware concurrency
  bool timing = false;

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

struct RecoveryReport {
  std::string algorithm;
  std::uint64_t p = 0;
  std::uint64_t e = 0;
  Residue planted = 0;
  Residue recovered = 0;
  std::uint64_t oracle_calls = 0;
  std::optional<std::uint64_t> seed;
  std::optional<double> wall_time_ms;
  Trace phases;

  Json to_json() const;
};

struct IdentityReport {
  Variant variant = Variant::KnownT;
  std::uint64_t p = 0;
  std::uint64_t e = 0;
  Residue s = 0;
  Residue t = 0;
  IdentityResult result;
  HMode mode = HMode::Exact;
  std::uint64_t oracle_calls = 0;
  std::uint64_t h_small_e = 0;
  bool agrees_with_truth = true;

  Json to_json() const;
};

struct LabRow {
  Json params;  // full input tuple
  Json exact;   // exact integer count, or |sum| for character sums
  double predicted = 0.0;
  double ratio = 0.0;
  Json extra = Json::object();
  std::string status = "ok";
};

struct LabReport {
  std::string lemma_id;
  std::vector<LabRow> rows;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;

  std::vector<Json> to_rows() const;
};

/// Known lemma ids for the lab command.
const std::vector<std::string>& lab_lemmas();

RecoveryReport run_recover(const ExperimentConfig& config);
IdentityReport run_identity(const ExperimentConfig& config);
LabRow evaluate_lab_point(const std::string& lemma, const Json& params);
LabReport run_lab(const ExperimentConfig& config);
std::vector<Json> run_bench(const ExperimentConfig& config);

/// Runs the configured command and returns its report rows.
std::vector<Json> run_command(const ExperimentConfig& config);

/// JSON lines, CSV with a header row, or an aligned text table.
void emit_rows(std::ostream& out, OutputFormat format, const std::vector<Json>& rows);

/// Parses a grid given as a path to a JSON file or as inline JSON text.
std::vector<Json> load_grid(const std::string& source);

}  // namespace shiftbreak
