#include "minimax/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include "minimax/baselines.hpp"
#include "minimax/group_loss.hpp"
#include "minimax/random.hpp"
#include "text_format.hpp"

namespace minimax {

using nlohmann::json;

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::pair<double, double> x_range(const GroupedDataset& data) {
  const Eigen::MatrixXd x = data.pooled_x();
  return {x.col(0).minCoeff(), x.col(0).maxCoeff()};
}

}  // namespace

json ExperimentReport::to_json() const {
  json j;
  j["config"] = config;
  json fits_json = json::object();
  for (const auto& [name, fit] : fits) {
    fits_json[name] = {{"model", fit.model},
                       {"params", to_std(fit.params)},
                       {"objective_kind", fit.objective_kind},
                       {"objective", fit.objective},
                       {"status", fit.status}};
  }
  j["fits"] = std::move(fits_json);
  j["metrics"] = metrics;
  j["curves"] = curves;
  j["timings"] = timings;
  j["seed"] = {{"value", seed ? json(*seed) : json(nullptr)}, {"prng", prng}};
  return j;
}

ExperimentReport ExperimentReport::from_json(const json& j) {
  try {
    ExperimentReport r;
    r.config = j.at("config");
    for (const auto& [name, fit] : j.at("fits").items()) {
      Fit f;
      f.model = fit.at("model").get<std::string>();
      f.params = to_eigen(fit.at("params").get<std::vector<double>>());
      f.objective_kind = fit.at("objective_kind").get<std::string>();
      f.objective = fit.at("objective").get<double>();
      f.status = fit.at("status").get<std::string>();
      r.fits.emplace(name, std::move(f));
    }
    r.metrics = j.at("metrics").get<std::map<std::string, double>>();
    r.curves = j.at("curves").get<std::map<std::string, std::vector<double>>>();
    r.timings = j.at("timings").get<std::map<std::string, double>>();
    const json& seed = j.at("seed");
    if (!seed.at("value").is_null()) r.seed = seed.at("value").get<std::uint64_t>();
    r.prng = seed.at("prng").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

json solver_config_to_json(const SolverConfig& config) {
  json j = {{"xi", config.xi},
            {"delta", config.delta},
            {"sigma", config.sigma},
            {"max_iterations", config.max_iterations},
            {"max_backtracks", config.max_backtracks}};
  struct Visitor {
    json operator()(const ZeroInit&) const { return "zeros"; }
    json operator()(const ParameterVector& p) const { return to_std(p); }
    json operator()(const RandomInit& r) const { return {{"seed", r.seed}, {"scale", r.scale}}; }
  };
  j["initial_params"] = std::visit(Visitor{}, config.initial_params);
  return j;
}

SolverConfig solver_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("solver config must be a JSON object");
  SolverConfig config;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "xi") {
        config.xi = value.get<double>();
      } else if (key == "delta") {
        config.delta = value.get<double>();
      } else if (key == "sigma") {
        config.sigma = value.get<double>();
      } else if (key == "max_iterations") {
        config.max_iterations = value.get<int>();
      } else if (key == "max_backtracks") {
        config.max_backtracks = value.get<int>();
      } else if (key == "initial_params") {
        if (value.is_string() && value.get<std::string>() == "zeros") {
          config.initial_params = ZeroInit{};
        } else if (value.is_array()) {
          config.initial_params = to_eigen(value.get<std::vector<double>>());
        } else if (value.is_object()) {
          RandomInit r;
          r.seed = value.at("seed").get<std::uint64_t>();
          if (value.contains("scale")) r.scale = value.at("scale").get<double>();
          config.initial_params = r;
        } else {
          throw ConfigError("initial_params must be \"zeros\", an array, or {\"seed\": ...}");
        }
      } else {
        throw ConfigError("unknown solver config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad solver config: ") + e.what());
  }
  config.validate();
  return config;
}

SolverConfig load_solver_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return solver_config_from_json(j);
}

namespace {

Fit minimax_fit(const Model& model, const SolveReport& solved) {
  return {model.name(), solved.final_params, "max_group_loss", solved.final_phi,
          std::string(to_string(solved.status))};
}

void add_solver_curves(ExperimentReport& report, const std::string& prefix,
                       const SolveReport& solved) {
  report.curves[prefix + "_phi"] = solved.phi_curve();
  std::vector<double> norms;
  std::vector<double> steps;
  for (const auto& rec : solved.trajectory) {
    norms.push_back(rec.direction_norm);
    steps.push_back(rec.step);
  }
  norms.push_back(solved.final_direction_norm);
  report.curves[prefix + "_direction_norm"] = std::move(norms);
  report.curves[prefix + "_step"] = std::move(steps);
  report.metrics[prefix + "_iterations"] = static_cast<double>(solved.trajectory.size());
  report.metrics[prefix + "_phi_evaluations"] = solved.phi_evaluations;
  report.metrics[prefix + "_qp_iterations"] = solved.qp_iterations;
  report.metrics[prefix + "_final_direction_norm"] = solved.final_direction_norm;
}

}  // namespace

ExperimentReport run_example41(const Example41Options& options) {
  const GroupedDataset data = generate_example41();
  const Model model = Model::linear(1);
  ParameterVector truth(2);
  truth << kExample41TrueSlope, kExample41TrueIntercept;

  ExperimentReport report;
  const auto [lo, hi] = x_range(data);
  report.config = {{"experiment", "exp41"},
                   {"solver", solver_config_to_json(options.solver)},
                   {"true_params", to_std(truth)},
                   {"x_range", {lo, hi}}};

  Stopwatch lsq_clock;
  const ParameterVector lsq = least_squares_fit(data);
  const double lsq_seconds = lsq_clock.seconds();

  Stopwatch minimax_clock;
  const SolveReport solved = solve(model, data, options.solver);
  const double minimax_seconds = minimax_clock.seconds();

  report.fits["least_squares"] = {model.name(), lsq, "average_loss",
                                  average_loss(model, lsq, data).value, ""};
  report.fits["minimax"] = minimax_fit(model, solved);

  const ParamErrors lsq_err = param_error_metrics(truth, lsq);
  const ParamErrors mm_err = param_error_metrics(truth, solved.final_params);
  report.metrics["least_squares_mse"] = lsq_err.mse;
  report.metrics["least_squares_mae"] = lsq_err.mae;
  report.metrics["least_squares_max_group_loss"] = phi_value(model, lsq, data);
  report.metrics["minimax_mse"] = mm_err.mse;
  report.metrics["minimax_mae"] = mm_err.mae;
  report.metrics["minimax_average_loss"] = average_loss(model, solved.final_params, data).value;
  add_solver_curves(report, "minimax", solved);

  if (options.record_timings) {
    report.timings["least_squares_seconds"] = lsq_seconds;
    report.timings["minimax_seconds"] = minimax_seconds;
  }
  return report;
}

ExperimentReport run_unbalanced_ml(const UnbalancedMlOptions& options) {
  if (options.steps < 1) throw ConfigError("steps must be >= 1");
  Stopwatch total_clock;
  const GroupedDataset train = generate_synthetic_unbalanced(options.data);
  const GroupedDataset test = generate_balanced_test(options.data.seed + 1,
                                                     options.data.input_dim,
                                                     options.test_per_class);
  const Model model = Model::sigmoid_unit(options.data.input_dim);
  const ParameterVector start = make_initial_params(options.solver.initial_params,
                                                    model.param_count());

  ExperimentReport report;
  report.seed = options.data.seed;
  report.prng = std::string(Rng::kName);
  report.config = {{"experiment", "exp-ml"},
                   {"data",
                    {{"input_dim", options.data.input_dim},
                     {"groups", options.data.groups},
                     {"group_size", options.data.group_size},
                     {"positive_fraction", options.data.positive_fraction}}},
                   {"steps", options.steps},
                   {"test_per_class", options.test_per_class},
                   {"test_seed", options.data.seed + 1},
                   {"initial_learning_rate", options.initial_learning_rate},
                   {"threshold", 0.5},
                   {"solver", solver_config_to_json(options.solver)}};

  Stopwatch baseline_clock;
  const DescentResult baseline = monotone_average_loss_descent(
      model, train, options.steps, options.initial_learning_rate, start);
  const double baseline_seconds = baseline_clock.seconds();

  SolverConfig solver_config = options.solver;
  solver_config.max_iterations = options.steps;
  Stopwatch minimax_clock;
  const SolveReport solved = solve(model, train, solver_config);
  const double minimax_seconds = minimax_clock.seconds();

  const auto steps = static_cast<std::size_t>(options.steps);
  std::vector<double> base_loss, base_worst, base_acc, mm_loss, mm_worst, mm_acc;
  for (std::size_t k = 0; k < steps; ++k) {
    const ParameterVector& ub = baseline.iterates[k];
    base_loss.push_back(baseline.loss_curve[k]);
    base_worst.push_back(phi_value(model, ub, train));
    base_acc.push_back(classification_accuracy(model, ub, test));
    // After the solver stops the iterate no longer moves.
    const bool moving = k < solved.trajectory.size();
    const ParameterVector& um = moving ? solved.trajectory[k].params : solved.final_params;
    mm_worst.push_back(moving ? solved.trajectory[k].phi : solved.final_phi);
    mm_loss.push_back(average_loss(model, um, train).value);
    mm_acc.push_back(classification_accuracy(model, um, test));
  }
  report.curves["average_loss_method_loss"] = std::move(base_loss);
  report.curves["average_loss_method_worst_group_loss"] = std::move(base_worst);
  report.curves["average_loss_method_test_accuracy"] = std::move(base_acc);
  report.curves["minimax_method_loss"] = std::move(mm_loss);
  report.curves["minimax_method_worst_group_loss"] = std::move(mm_worst);
  report.curves["minimax_method_test_accuracy"] = std::move(mm_acc);

  report.fits["average_loss"] = {model.name(), baseline.params, "average_loss",
                                 baseline.loss_curve.back(), ""};
  report.fits["minimax"] = minimax_fit(model, solved);

  report.metrics["average_loss_learning_rate"] = baseline.learning_rate;
  report.metrics["average_loss_final_test_accuracy"] =
      classification_accuracy(model, baseline.params, test);
  report.metrics["average_loss_final_worst_group_loss"] = phi_value(model, baseline.params, train);
  report.metrics["average_loss_final_train_accuracy"] =
      classification_accuracy(model, baseline.params, train);
  report.metrics["minimax_final_test_accuracy"] =
      classification_accuracy(model, solved.final_params, test);
  report.metrics["minimax_final_average_loss"] =
      average_loss(model, solved.final_params, train).value;
  report.metrics["minimax_final_train_accuracy"] =
      classification_accuracy(model, solved.final_params, train);
  report.metrics["minimax_iterations"] = static_cast<double>(solved.trajectory.size());
  report.metrics["minimax_phi_evaluations"] = solved.phi_evaluations;
  report.metrics["minimax_final_direction_norm"] = solved.final_direction_norm;

  if (options.record_timings) {
    report.timings["average_loss_seconds"] = baseline_seconds;
    report.timings["minimax_seconds"] = minimax_seconds;
    report.timings["total_seconds"] = total_clock.seconds();
  }
  return report;
}

ExperimentReport run_fit_minimax(const Model& model, const GroupedDataset& data,
                                 const SolverConfig& config, bool record_timings) {
  ExperimentReport report;
  report.config = {{"experiment", "fit-minimax"},
                   {"model", model.name()},
                   {"solver", solver_config_to_json(config)}};
  if (data.input_dim() == 1) {
    const auto [lo, hi] = x_range(data);
    report.config["x_range"] = {lo, hi};
  }
  Stopwatch clock;
  const SolveReport solved = solve(model, data, config);
  const double seconds = clock.seconds();
  report.fits["minimax"] = minimax_fit(model, solved);
  add_solver_curves(report, "minimax", solved);
  report.metrics["minimax_average_loss"] = average_loss(model, solved.final_params, data).value;
  if (record_timings) report.timings["minimax_seconds"] = seconds;
  return report;
}

ExperimentReport run_fit_least_squares(const GroupedDataset& data, bool record_timings) {
  const Model model = Model::linear(data.input_dim());
  ExperimentReport report;
  report.config = {{"experiment", "fit-lsq"}, {"model", model.name()}};
  if (data.input_dim() == 1) {
    const auto [lo, hi] = x_range(data);
    report.config["x_range"] = {lo, hi};
  }
  Stopwatch clock;
  const ParameterVector fit = least_squares_fit(data);
  const double seconds = clock.seconds();
  report.fits["least_squares"] = {model.name(), fit, "average_loss",
                                  average_loss(model, fit, data).value, ""};
  report.metrics["least_squares_max_group_loss"] = phi_value(model, fit, data);
  if (record_timings) report.timings["least_squares_seconds"] = seconds;
  return report;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::filesystem::path& out_dir,
                                               const std::vector<ReportFormat>& formats) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw IoError("cannot create output directory '" + out_dir.string() + "'");
  }
  std::vector<std::filesystem::path> written;
  const bool want_json = std::ranges::find(formats, ReportFormat::Json) != formats.end();
  const bool want_csv = std::ranges::find(formats, ReportFormat::CsvCurves) != formats.end();

  if (want_json) {
    const auto path = out_dir / "report.json";
    write_text(path, report.to_json().dump(2) + "\n");
    written.push_back(path);
  }
  if (!want_csv) return written;

  for (const auto& [name, values] : report.curves) {
    std::string text = "iteration,value\n";
    for (std::size_t k = 0; k < values.size(); ++k) {
      text += std::to_string(k) + "," + detail::format_double(values[k]) + "\n";
    }
    const auto path = out_dir / ("curve_" + name + ".csv");
    write_text(path, text);
    written.push_back(path);
  }

  const auto range = report.config.find("x_range");
  if (range != report.config.end() && range->is_array() && range->size() == 2) {
    const double lo = (*range)[0].get<double>();
    const double hi = (*range)[1].get<double>();
    constexpr int kPoints = 100;
    for (const auto& [name, fit] : report.fits) {
      if (fit.model != "linear" || fit.params.size() != 2) continue;
      std::string text = "x,y_pred\n";
      for (int i = 0; i < kPoints; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (kPoints - 1);
        text += detail::format_double(x) + "," +
                detail::format_double(fit.params(0) * x + fit.params(1)) + "\n";
      }
      const auto path = out_dir / ("linefit_" + name + ".csv");
      write_text(path, text);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace minimax
