#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "minimax/grouped_data.hpp"
#include "minimax/model.hpp"
#include "minimax/solver.hpp"

namespace minimax {

struct Fit {
  std::string model;  ///< "linear" | "sigmoid"
  ParameterVector params;
  std::string objective_kind;  ///< what `objective` measures, e.g. "max_group_loss"
  double objective = 0.0;
  std::string status;  ///< solver status, empty for closed-form fits
};

/// Everything one experiment produced. Serializes to JSON with the top-level keys
/// config, fits, metrics, curves, timings and seed.
struct ExperimentReport {
  nlohmann::json config = nlohmann::json::object();
  std::map<std::string, Fit> fits;
  std::map<std::string, double> metrics;
  std::map<std::string, std::vector<double>> curves;
  /// Wall-clock seconds; only filled when timings were requested.
  std::map<std::string, double> timings;
  std::optional<std::uint64_t> seed;
  std::string prng;

  nlohmann::json to_json() const;
  static ExperimentReport from_json(const nlohmann::json& j);
  bool operator==(const ExperimentReport& other) const { return to_json() == other.to_json(); }
};

nlohmann::json solver_config_to_json(const SolverConfig& config);
/// Keys mirror SolverConfig fields. Unknown keys are rejected with ConfigError.
SolverConfig solver_config_from_json(const nlohmann::json& j);
SolverConfig load_solver_config(const std::filesystem::path& path);

struct Example41Options {
  SolverConfig solver;
  bool record_timings = false;
};

/// Least squares vs mini-max on the noisy line-fit data, scored against the true line.
ExperimentReport run_example41(const Example41Options& options = {});

struct UnbalancedMlOptions {
  UnbalancedConfig data;
  int steps = 100;
  int test_per_class = 1000;
  /// Starting point of the baseline's halving search.
  double initial_learning_rate = 16.0;
  SolverConfig solver;
  bool record_timings = false;
};

/// Sigmoid unit trained by pooled-loss gradient descent and by the mini-max solver on
/// the same unbalanced groups; curves are indexed by iteration 0 .. steps - 1, accuracy
/// measured on a balanced test set drawn with seed + 1.
ExperimentReport run_unbalanced_ml(const UnbalancedMlOptions& options = {});

/// Fit a single model on a dataset and wrap the outcome as a report.
ExperimentReport run_fit_minimax(const Model& model, const GroupedDataset& data,
                                 const SolverConfig& config, bool record_timings = false);
ExperimentReport run_fit_least_squares(const GroupedDataset& data, bool record_timings = false);

enum class ReportFormat { Json, CsvCurves };

/// Writes report.json and/or curve_<name>.csv (header iteration,value) plus
/// linefit_<fit>.csv (header x,y_pred, 100 points) for one-input linear fits when the
/// config carries an x_range. Returns the written paths. Throws IoError.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& out_dir,
                                               const std::vector<ReportFormat>& formats = {
                                                   ReportFormat::Json, ReportFormat::CsvCurves});

}  // namespace minimax
