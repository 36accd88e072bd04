#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "dao/config.hpp"
#include "dao/evalkit.hpp"

namespace dao {

struct CalibrationReport {
  Task task = Task::ED;
  std::size_t n = 0;
  double delta = 0.1;
  double threshold = 0.0;
  bool overridden = false;
};

/// Calibrates q_0 for ED and EAE from the calib split of `corpus` and writes
/// the values back into the config file. Tasks with an override are skipped.
/// Throws EmptyCalibrationSet.
std::vector<CalibrationReport> cmd_calibrate(const std::filesystem::path& config_path,
                                             const std::filesystem::path& corpus, std::ostream& log);

enum class RunMode { EE, EAE };

struct RunSummary {
  std::size_t sentences = 0;
  std::size_t events = 0;
  std::size_t warnings = 0;
};

/// Writes config.json, predictions.jsonl, transcripts.jsonl and
/// histograms.json into `out_dir`. EAE mode debates arguments for the gold
/// triggers of the input. Throws BackendError, IoError.
RunSummary cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& input,
                   const std::filesystem::path& out_dir, RunMode mode, std::ostream& log);

enum class EvalTask { ED, EAE, EE };
enum class EvalMetric { Exact, Head, Types };

std::optional<EvalTask> parse_eval_task(std::string_view name);
std::optional<EvalMetric> parse_eval_metric(std::string_view name);

/// Scores predictions (corpus format, split optional) against gold. Sentence
/// ids present on one side only are scored as fp/fn and reported as warnings.
nlohmann::json cmd_eval(const std::filesystem::path& pred, const std::filesystem::path& gold, EvalTask task,
                        EvalMetric metric);

/// Fixed-width text table of a cmd_eval report.
std::string format_report(const nlohmann::json& report);

}  // namespace dao
