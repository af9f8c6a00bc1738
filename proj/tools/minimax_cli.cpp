// Command-line front end: dataset generation, single fits and the two experiments.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "minimax/baselines.hpp"
#include "minimax/errors.hpp"
#include "minimax/experiments.hpp"
#include "minimax/grouped_data.hpp"
#include "minimax/simplex_qp.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct SolverFlags {
  std::string config_path;
  std::optional<double> xi, delta, sigma;
  std::optional<int> max_iter;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Solver config JSON");
    cmd->add_option("--xi", xi, "Termination accuracy on ||d||");
    cmd->add_option("--delta", delta, "QP KKT tolerance");
    cmd->add_option("--sigma", sigma, "Backtracking factor in (0,1)");
    cmd->add_option("--max-iter", max_iter, "Iteration cap");
  }

  minimax::SolverConfig resolve() const {
    minimax::SolverConfig config =
        config_path.empty() ? minimax::SolverConfig{} : minimax::load_solver_config(config_path);
    if (xi) config.xi = *xi;
    if (delta) config.delta = *delta;
    if (sigma) config.sigma = *sigma;
    if (max_iter) config.max_iterations = *max_iter;
    config.validate();
    return config;
  }
};

void print_fits(const minimax::ExperimentReport& report) {
  for (const auto& [name, fit] : report.fits) {
    std::cout << name << ":";
    for (Eigen::Index i = 0; i < fit.params.size(); ++i) std::cout << ' ' << fit.params(i);
    std::cout << "  " << fit.objective_kind << '=' << fit.objective;
    if (!fit.status.empty()) std::cout << "  status=" << fit.status;
    std::cout << '\n';
  }
}

void finish(const minimax::ExperimentReport& report, const std::string& out_dir) {
  print_fits(report);
  if (!out_dir.empty()) {
    for (const auto& path : minimax::emit_report(report, out_dir)) {
      std::cout << "wrote " << path.string() << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group-wise mini-max regression"};
  app.require_subcommand(1);

  std::string data_path;
  std::string out_dir;
  std::string model_name = "linear";
  bool timings = false;
  SolverFlags solver_flags;

  auto* fit_minimax = app.add_subcommand("fit-minimax", "Mini-max fit of a CSV dataset");
  fit_minimax->add_option("--data", data_path, "Dataset CSV (group,y,x1..xd)")->required();
  fit_minimax->add_option("--model", model_name, "linear | sigmoid");
  fit_minimax->add_option("--out", out_dir, "Output directory for report and curves");
  fit_minimax->add_flag("--timings", timings, "Record wall-clock timings");
  solver_flags.attach(fit_minimax);

  auto* fit_lsq = app.add_subcommand("fit-lsq", "Least-squares fit of a CSV dataset");
  fit_lsq->add_option("--data", data_path, "Dataset CSV (group,y,x1..xd)")->required();
  fit_lsq->add_option("--out", out_dir, "Output directory for report");
  fit_lsq->add_flag("--timings", timings, "Record wall-clock timings");

  auto* exp41 = app.add_subcommand("exp41", "Least squares vs mini-max on the 1517-sample line");
  exp41->add_option("--out", out_dir, "Output directory for report and curves");
  exp41->add_flag("--timings", timings, "Record wall-clock timings");
  solver_flags.attach(exp41);

  minimax::UnbalancedMlOptions ml;
  auto* exp_ml = app.add_subcommand("exp-ml", "Sigmoid unit on unbalanced synthetic groups");
  exp_ml->add_option("--seed", ml.data.seed, "Generator seed (test set uses seed+1)");
  exp_ml->add_option("--dim", ml.data.input_dim, "Input dimension");
  exp_ml->add_option("--groups", ml.data.groups, "Number of groups");
  exp_ml->add_option("--group-size", ml.data.group_size, "Samples per group");
  exp_ml->add_option("--fraction", ml.data.positive_fraction, "Fraction of positives");
  exp_ml->add_option("--steps", ml.steps, "Iterations for both methods");
  exp_ml->add_option("--test-per-class", ml.test_per_class, "Balanced test samples per class");
  exp_ml->add_option("--rate", ml.initial_learning_rate, "Initial baseline learning rate");
  exp_ml->add_option("--out", out_dir, "Output directory for report and curves");
  exp_ml->add_flag("--timings", timings, "Record wall-clock timings");
  solver_flags.attach(exp_ml);

  std::string kind = "example41";
  minimax::UnbalancedConfig gen;
  std::string gen_out;
  auto* gen_data = app.add_subcommand("gen-data", "Write a built-in dataset as CSV");
  gen_data->add_option("--kind", kind, "example41 | unbalanced | balanced-test");
  gen_data->add_option("--seed", gen.seed, "Generator seed");
  gen_data->add_option("--dim", gen.input_dim, "Input dimension");
  gen_data->add_option("--groups", gen.groups, "Number of groups");
  gen_data->add_option("--group-size", gen.group_size, "Samples per group (per class for balanced-test)");
  gen_data->add_option("--fraction", gen.positive_fraction, "Fraction of positives");
  gen_data->add_option("--out", gen_out, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*fit_minimax) {
      const auto data = minimax::load_csv(data_path);
      const auto model = minimax::Model::from_name(model_name, data.input_dim());
      finish(minimax::run_fit_minimax(model, data, solver_flags.resolve(), timings), out_dir);
    } else if (*fit_lsq) {
      finish(minimax::run_fit_least_squares(minimax::load_csv(data_path), timings), out_dir);
    } else if (*exp41) {
      minimax::Example41Options options;
      options.solver = solver_flags.resolve();
      options.record_timings = timings;
      const auto report = minimax::run_example41(options);
      finish(report, out_dir);
      for (const auto& [name, value] : report.metrics) std::cout << name << " = " << value << '\n';
    } else if (*exp_ml) {
      ml.solver = solver_flags.resolve();
      ml.record_timings = timings;
      const auto report = minimax::run_unbalanced_ml(ml);
      finish(report, out_dir);
      for (const auto& [name, value] : report.metrics) std::cout << name << " = " << value << '\n';
    } else if (*gen_data) {
      if (kind == "example41") {
        minimax::save_csv(minimax::generate_example41(), gen_out);
      } else if (kind == "unbalanced") {
        minimax::save_csv(minimax::generate_synthetic_unbalanced(gen), gen_out);
      } else if (kind == "balanced-test") {
        minimax::save_csv(minimax::generate_balanced_test(gen.seed, gen.input_dim, gen.group_size),
                          gen_out);
      } else {
        throw minimax::ConfigError("unknown dataset kind '" + kind + "'");
      }
      std::cout << "wrote " << gen_out << '\n';
    }
  } catch (const minimax::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const minimax::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
