#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chebdes/linalg.hpp"
#include "chebdes/model.hpp"

namespace chebdes {

enum class CommandKind { Solve, Table1, Table2, Sweep, Asympt, Check };
enum class OutputFormat { Json, Csv };
enum class CriterionKind { E, C };
enum class SweepKind { Efficiency, Ratio };
enum class AsymptMode { Expansion, Convergence };

std::string command_name(CommandKind k);
CommandKind command_from_name(const std::string& name);

struct CriterionConfig {
  CriterionKind kind = CriterionKind::E;
  Vector c;  // used when kind == C
};

struct NumericConfig {
  int grid_size = 10000;
  double tol = 1e-8;
  unsigned long seed = 0;  // accepted for reproducibility bookkeeping; all algorithms are deterministic
};

struct OutputConfig {
  OutputFormat format = OutputFormat::Json;
  std::string path;    // empty: standard output
  bool round = false;  // 2-decimal presentation for table/sweep/asympt CSV
};

struct SweepConfig {
  SweepKind kind = SweepKind::Efficiency;
  int b_index = 1;  // 1-based position in model.b
  double from = 0.0;
  double to = 0.0;
  int steps = 1;
};

struct AsymptConfig {
  AsymptMode mode = AsymptMode::Expansion;
  double x = 0.0;
  std::vector<double> r;
  std::vector<double> delta;  // defaults to the standard geometric list
  std::optional<Vector> c;    // convergence only
};

struct JobConfig {
  CommandKind command = CommandKind::Solve;
  std::optional<ModelSpec> model;
  std::optional<CriterionConfig> criterion;
  NumericConfig numeric;
  OutputConfig output;
  std::vector<double> table_z;
  std::optional<SweepConfig> sweep;
  std::optional<AsymptConfig> asympt;
  std::string design_path;
};

// Parses and validates a JSON job description. Unknown keys anywhere are
// rejected. Throws parameter_error with a specific message on any problem.
// forced_command, when set, supplies the command (a "command" key must then
// either be absent or agree with it).
JobConfig parse_job(const std::string& json_text,
                    const std::optional<std::string>& forced_command = std::nullopt);

}  // namespace chebdes
