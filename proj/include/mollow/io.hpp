#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mollow/fluorescence.hpp"
#include "mollow/sensing.hpp"
#include "mollow/sweep.hpp"

namespace mollow::io {

inline constexpr std::string_view kToolName = "mollow";
inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr std::string_view kUnits =
    "frequencies and rates in units of gamma; times in units of 1/gamma; frequencies laser-relative";

enum class TaskType { spectrum, g2tau, landscape, timefreq, compare_approx };

std::string_view to_string(TaskType task);
std::optional<TaskType> task_from_string(std::string_view name);

struct ScenarioConfig {
  fluorescence::EmitterParams emitter;
  std::vector<sensing::SensorSpec> sensors;
  std::optional<double> epsilon;  ///< applied to every sensor when set
  TaskType task = TaskType::spectrum;
  std::optional<sweep::GridSpec> omega;   ///< spectrum
  std::optional<sweep::GridSpec> omega1;  ///< landscape, timefreq
  std::optional<sweep::GridSpec> omega2;  ///< landscape
  std::optional<sweep::GridSpec> tau;     ///< g2tau, timefreq, compare-approx
  bool both_orderings = false;            ///< g2tau
  fluorescence::SidebandOrder order = fluorescence::SidebandOrder::high_then_low;  ///< compare-approx
  std::string output;
  unsigned workers = 0;
};

/// Parses and validates a JSON scenario. Throws SchemaError (structure,
/// types, unknown keys) or ValidationError (physical invariants); both name
/// the offending field path.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

struct ResultTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::optional<std::string> meta(std::string_view key) const;
};

/// Shortest decimal text that reads back to the identical double (17 significant digits).
std::string format_number(double v);

std::string format_csv(const ResultTable& table);
ResultTable parse_csv(std::string_view text);
void emit_csv(const ResultTable& table, const std::filesystem::path& path);
ResultTable read_csv(const std::filesystem::path& path);

enum class PlotKind { landscape, trace, spectrum, comparison };

struct TaskOutput {
  ResultTable table;
  PlotKind kind = PlotKind::trace;
  std::vector<sweep::LeapfrogLine> annotations;
  std::string x_column;  ///< landscape / time-frequency axes
  std::string y_column;
  bool all_converged = true;
};

/// Executes the configured task and assembles the table with its metadata header.
TaskOutput run_task(const ScenarioConfig& config, const sweep::SweepOptions& opts);

/// Writes a standalone matplotlib script that renders the CSV at `csv_path`,
/// referenced relative to the script's directory.
void emit_plot_script(const TaskOutput& output, const std::filesystem::path& csv_path,
                      const std::filesystem::path& script_path);
std::string plot_script(const TaskOutput& output, std::string_view csv_relative);

} // namespace mollow::io
