#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>

#include "minimax/experiments.hpp"
#include "minimax/random.hpp"

namespace fs = std::filesystem;
using namespace minimax;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "minimax_experiments_test" / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

UnbalancedMlOptions small_ml() {
  UnbalancedMlOptions o;
  o.data.groups = 6;
  o.data.group_size = 100;
  o.data.positive_fraction = 1.0 / 6.0;
  o.steps = 25;
  o.test_per_class = 200;
  return o;
}

}  // namespace

TEST_CASE("line-fit experiment report contents") {
  const ExperimentReport r = run_example41();
  const Fit& mm = r.fits.at("minimax");
  const Fit& lsq = r.fits.at("least_squares");
  CHECK(mm.status == "converged_direction_norm");
  CHECK(mm.model == "linear");
  CHECK(r.metrics.at("minimax_mse") < r.metrics.at("least_squares_mse"));
  CHECK(r.metrics.at("minimax_mae") < r.metrics.at("least_squares_mae"));
  CHECK(lsq.params(0) == doctest::Approx(0.45464809).epsilon(1e-7));
  CHECK(r.timings.empty());
  CHECK(r.curves.at("minimax_phi").size() == r.curves.at("minimax_step").size() + 1);

  const auto j = r.to_json();
  for (const char* key : {"config", "fits", "metrics", "curves", "timings", "seed"}) {
    CHECK(j.contains(key));
  }
  CHECK(j.size() == 6);
}

TEST_CASE("timings are opt-in") {
  Example41Options o;
  o.record_timings = true;
  const ExperimentReport r = run_example41(o);
  CHECK(r.timings.count("minimax_seconds") == 1);
  CHECK(r.timings.at("minimax_seconds") >= 0.0);
}

TEST_CASE("report JSON round trip") {
  const ExperimentReport r = run_example41();
  const ExperimentReport back = ExperimentReport::from_json(nlohmann::json::parse(r.to_json().dump()));
  CHECK(back == r);
  CHECK(back.fits.at("minimax").params == r.fits.at("minimax").params);

  ExperimentReport empty;
  CHECK(ExperimentReport::from_json(empty.to_json()) == empty);
  CHECK_THROWS_AS(ExperimentReport::from_json(nlohmann::json::object()), ConfigError);
}

TEST_CASE("emit report files") {
  const ExperimentReport r = run_example41();
  const fs::path dir = temp_dir("emit");
  const auto files = emit_report(r, dir);
  CHECK(fs::exists(dir / "report.json"));
  const auto parsed = ExperimentReport::from_json(nlohmann::json::parse(slurp(dir / "report.json")));
  CHECK(parsed == r);

  const fs::path phi_csv = dir / "curve_minimax_phi.csv";
  REQUIRE(fs::exists(phi_csv));
  const std::size_t iterations = r.curves.at("minimax_step").size();
  CHECK(line_count(phi_csv) == 1 + iterations + 1);
  CHECK(slurp(phi_csv).rfind("iteration,value\n0,", 0) == 0);

  const fs::path line_csv = dir / "linefit_minimax.csv";
  REQUIRE(fs::exists(line_csv));
  CHECK(line_count(line_csv) == 101);
  CHECK(slurp(line_csv).rfind("x,y_pred\n0.04,", 0) == 0);
  CHECK(fs::exists(dir / "linefit_least_squares.csv"));
}

TEST_CASE("empty curve emits a header-only file") {
  ExperimentReport r;
  r.curves["nothing"] = {};
  const fs::path dir = temp_dir("empty_curve");
  emit_report(r, dir, {ReportFormat::CsvCurves});
  CHECK(slurp(dir / "curve_nothing.csv") == "iteration,value\n");
  CHECK_FALSE(fs::exists(dir / "report.json"));
}

TEST_CASE("unwritable output directory") {
  const fs::path file = temp_dir("blocker");
  fs::create_directories(file.parent_path());
  std::ofstream(file) << "not a directory";
  CHECK_THROWS_AS(emit_report(ExperimentReport{}, file / "sub"), IoError);
}

TEST_CASE("line-fit experiment JSON is byte-identical across runs") {
  CHECK(run_example41().to_json().dump(2) == run_example41().to_json().dump(2));
}

TEST_CASE("unbalanced run curves and determinism") {
  const UnbalancedMlOptions o = small_ml();
  const ExperimentReport a = run_unbalanced_ml(o);
  for (const auto& [name, curve] : a.curves) {
    CHECK_MESSAGE(curve.size() == static_cast<std::size_t>(o.steps), name);
  }
  CHECK(a.seed == o.data.seed);
  CHECK(a.prng == std::string(Rng::kName));
  CHECK(a.to_json() == run_unbalanced_ml(o).to_json());
  const auto& worst = a.curves.at("minimax_method_worst_group_loss");
  for (std::size_t k = 1; k < worst.size(); ++k) CHECK(worst[k] <= worst[k - 1]);

  UnbalancedMlOptions other = o;
  other.data.seed = 9;
  CHECK_FALSE(run_unbalanced_ml(other).to_json() == a.to_json());
}

TEST_CASE("solver config JSON") {
  SolverConfig c;
  c.xi = 1e-6;
  c.max_iterations = 7;
  c.initial_params = RandomInit{3, 0.25};
  const SolverConfig back = solver_config_from_json(solver_config_to_json(c));
  CHECK(back.xi == 1e-6);
  CHECK(back.max_iterations == 7);
  CHECK(std::get<RandomInit>(back.initial_params).seed == 3);

  const auto explicit_init = solver_config_from_json({{"initial_params", {0.5, -1.0}}});
  CHECK(std::get<ParameterVector>(explicit_init.initial_params)(1) == -1.0);
  CHECK(std::holds_alternative<ZeroInit>(solver_config_from_json({{"initial_params", "zeros"}}).initial_params));

  CHECK_THROWS_AS(solver_config_from_json({{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(solver_config_from_json({{"sigma", 2.0}}), ConfigError);
  CHECK_THROWS_AS(solver_config_from_json({{"xi", "small"}}), ConfigError);
  CHECK_THROWS_AS(solver_config_from_json(nlohmann::json::array()), ConfigError);
}

TEST_CASE("single-fit reports") {
  const GroupedDataset data = generate_example41();
  const ExperimentReport mm = run_fit_minimax(Model::linear(1), data, {});
  CHECK(mm.fits.count("minimax") == 1);
  CHECK(mm.config.contains("x_range"));
  const ExperimentReport lsq = run_fit_least_squares(data);
  CHECK(lsq.fits.at("least_squares").params.size() == 2);
}
