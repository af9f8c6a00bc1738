#include <doctest.h>

#include <algorithm>
#include <limits>
#include <string>

#include "minimax/solver.hpp"
#include "oracles.hpp"
#include "trajectory_checks.hpp"

using namespace minimax;

namespace {

ParameterVector vec(std::initializer_list<double> v) {
  ParameterVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

GroupedDataset singleton_line_data(const std::vector<std::pair<double, double>>& pts) {
  std::vector<std::vector<Sample>> groups;
  for (const auto& [x, y] : pts) groups.push_back({Sample{vec({x}), y}});
  return GroupedDataset::from_samples(groups);
}

void check_trajectory(const Model& m, const GroupedDataset& data, const SolveReport& r,
                      double xi = 1e-8) {
  const auto verdict = checks::verify_trajectory(m, data, r, xi);
  INFO(verdict.detail);
  CHECK(verdict.strictly_decreasing);
  CHECK(verdict.descent_bound_holds);
}

}  // namespace

TEST_CASE("descent direction with one group is steepest descent") {
  GroupJacobian jac{Eigen::MatrixXd(1, 3), Eigen::VectorXd::Constant(1, 2.0)};
  jac.g << 1.0, -2.0, 0.5;
  const Direction dir = descent_direction(jac);
  CHECK(dir.lambda(0) == 1.0);
  CHECK(dir.d == -jac.g.row(0).transpose());
}

TEST_CASE("opposing gradients give a zero direction") {
  GroupJacobian jac{Eigen::MatrixXd(2, 1), Eigen::VectorXd::Constant(2, 1.0)};
  jac.g << 1.0, -1.0;
  CHECK(descent_direction(jac).d.norm() < 1e-12);
}

TEST_CASE("property: direction does not exceed the d=0 model value") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int groups = 1 + trial % 6;
    const int n = 1 + trial % 3;
    GroupJacobian jac{oracle::random_matrix(rng, groups, n), Eigen::VectorXd(groups)};
    for (int j = 0; j < groups; ++j) jac.f(j) = rng.uniform(0.0, 3.0);
    const Direction dir = descent_direction(jac);
    CHECK(linearized_model(jac, dir.d) <= jac.f.maxCoeff() + 1e-12);
    // The dual direction is the primal minimizer.
    const double primal = oracle::primal_brute_force(jac.g, jac.f);
    CHECK(std::abs(linearized_model(jac, dir.d) - primal) <= 1e-8);
  }
}

TEST_CASE("line search on u^2") {
  const PhiEvaluator sq = [](const ParameterVector& u) { return u.squaredNorm(); };
  const auto r = backtracking_line_search(sq, vec({1.0}), vec({-2.0}), 0.5, 60);
  CHECK(r.backtracks == 1);
  CHECK(r.alpha == 0.5);
  CHECK(r.params(0) == 0.0);
  CHECK(r.phi == 0.0);

  const auto full = backtracking_line_search(sq, vec({1.0}), vec({-1.0}), 0.5, 60);
  CHECK(full.backtracks == 0);
  CHECK(full.alpha == 1.0);

  CHECK_THROWS_AS(backtracking_line_search(sq, vec({1.0}), vec({1.0}), 0.5, 60),
                  LineSearchStagnation);
  CHECK_THROWS_AS(backtracking_line_search(sq, vec({1.0}), vec({0.0}), 0.5, 60), ConfigError);
}

TEST_CASE("line search treats non-finite trial values as no decrease") {
  const PhiEvaluator blowup = [](const ParameterVector& u) {
    return u(0) < -0.75 ? std::numeric_limits<double>::infinity() : u(0) * u(0);
  };
  const auto r = backtracking_line_search(blowup, vec({1.0}), vec({-2.0}), 0.5, 60);
  CHECK(r.alpha == 0.5);
}

TEST_CASE("interpolating line converges to zero loss") {
  const GroupedDataset data = singleton_line_data({{0.0, 1.0}, {1.0, 3.0}, {2.0, 5.0}, {-1.0, -1.0}});
  const Model m = Model::linear(1);
  const SolveReport r = solve(m, data);
  CHECK(r.status == SolveStatus::ConvergedDirectionNorm);
  CHECK(r.final_phi <= 1e-12);
  CHECK(r.final_params(0) == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(r.final_params(1) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.final_direction_norm < 1e-8);
  check_trajectory(m, data, r);
}

TEST_CASE("directional derivative") {
  const Model m = Model::linear(1);
  const GroupedDataset one = singleton_line_data({{1.0, 2.0}});
  const ParameterVector u = vec({0.5, 0.0});
  const Eigen::VectorXd d = vec({0.3, -0.7});
  const auto g = group_loss(m, u, one.group(0)).grad;
  CHECK(directional_derivative(m, one, u, d) == doctest::Approx(g.dot(d)));

  // x = 0 inputs: f_1 = (b - 1/2)^2 and f_2 = (b + 1/2)^2 tie at b = 0 with
  // slopes -1 and +1 in b.
  const GroupedDataset two = singleton_line_data({{0.0, 0.5}, {0.0, -0.5}});
  const ParameterVector at = vec({0.0, 0.0});
  const Eigen::VectorXd e_b = vec({0.0, 1.0});
  const double dd = directional_derivative(m, two, at, e_b);
  CHECK(dd == doctest::Approx(1.0));
  // Limit definition from the right picks the max slope.
  const double t = 1e-7;
  const double limit = (phi_value(m, at + t * e_b, two) - phi_value(m, at, two)) / t;
  CHECK(limit == doctest::Approx(dd).epsilon(1e-5));

  const Eigen::VectorXd orth = vec({1.0, 0.0});  // x = 0 makes w irrelevant
  CHECK(directional_derivative(m, two, at, orth) == 0.0);
}

TEST_CASE("config validation and initial params") {
  SolverConfig bad;
  bad.sigma = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.xi = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.delta = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  CHECK(make_initial_params(ZeroInit{}, 3).isZero());
  CHECK(make_initial_params(vec({1, 2}), 2) == vec({1, 2}));
  CHECK_THROWS_AS(make_initial_params(vec({1, 2}), 3), DimensionError);
  const auto r1 = make_initial_params(RandomInit{5, 0.5}, 4);
  CHECK(r1 == make_initial_params(RandomInit{5, 0.5}, 4));
  CHECK(r1.cwiseAbs().maxCoeff() <= 0.5);

  const GroupedDataset data = singleton_line_data({{0.0, 1.0}});
  CHECK_THROWS_AS(solve(Model::linear(2), data), DimensionError);
}

TEST_CASE("max iterations status") {
  const GroupedDataset data = generate_example41();
  SolverConfig config;
  config.max_iterations = 2;
  const SolveReport r = solve(Model::linear(1), data, config);
  CHECK(r.status == SolveStatus::MaxIterations);
  CHECK(r.trajectory.size() == 2);
  CHECK(r.phi_curve().size() == 3);
}

TEST_CASE("property: convex case reaches the Chebyshev optimum") {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 8;
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(rng.uniform(-2, 2), rng.normal() + 0.7 * i);
    const GroupedDataset data = singleton_line_data(pts);
    const Model m = Model::linear(1);
    SolverConfig config;
    if (trial % 3 == 1) config.initial_params = RandomInit{static_cast<std::uint64_t>(trial), 3.0};
    const SolveReport r = solve(m, data, config);
    const oracle::Line best = oracle::chebyshev_line(pts);
    const double optimum = best.max_abs_residual * best.max_abs_residual;
    CHECK(std::abs(r.final_phi - optimum) <= 1e-6 * std::max(1.0, optimum));
    check_trajectory(m, data, r);
  }
}

TEST_CASE("property: stationarity at convergence") {
  Rng rng(123);
  int converged = 0;
  std::string violations;
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 1 + trial % 2;
    std::vector<std::vector<Sample>> groups;
    for (int j = 0; j < 2 + trial % 5; ++j) {
      std::vector<Sample> g;
      for (int l = 0; l < 1 + trial % 4; ++l) {
        Eigen::VectorXd x(dim);
        for (int k = 0; k < dim; ++k) x(k) = rng.normal();
        g.push_back({x, rng.normal()});
      }
      groups.push_back(std::move(g));
    }
    const GroupedDataset data = GroupedDataset::from_samples(groups);
    const Model m = Model::linear(dim);
    const SolveReport r = solve(m, data);
    check_trajectory(m, data, r);
    if (r.status != SolveStatus::ConvergedDirectionNorm) continue;
    ++converged;
    double worst = std::numeric_limits<double>::infinity();
    for (int v = 0; v < 100; ++v) {
      const Eigen::VectorXd dir = oracle::random_unit(rng, m.param_count());
      worst = std::min(worst, directional_derivative(m, data, r.final_params, dir));
    }
    if (worst < -1e-4) violations += "trial " + std::to_string(trial) + ": " +
                                     std::to_string(worst) + "; ";
  }
  CHECK(converged > 0);
  // Runs stopped by |d| < xi can leave near-max groups outside the exact active set.
  INFO(violations);
  CHECK(violations.empty());
}

TEST_CASE("sigmoid unit descent is monotone") {
  UnbalancedConfig cfg;
  cfg.groups = 5;
  cfg.group_size = 60;
  cfg.positive_fraction = 0.1;
  const GroupedDataset data = generate_synthetic_unbalanced(cfg);
  const Model m = Model::sigmoid_unit(cfg.input_dim);
  SolverConfig config;
  config.max_iterations = 40;
  const SolveReport r = solve(m, data, config);
  CHECK(r.trajectory.size() > 5);
  check_trajectory(m, data, r);
}

TEST_CASE("determinism") {
  const GroupedDataset data = generate_example41();
  const SolveReport a = solve(Model::linear(1), data);
  const SolveReport b = solve(Model::linear(1), data);
  REQUIRE(a.trajectory.size() == b.trajectory.size());
  for (std::size_t k = 0; k < a.trajectory.size(); ++k) {
    CHECK(a.trajectory[k].params == b.trajectory[k].params);
    CHECK(a.trajectory[k].lambda == b.trajectory[k].lambda);
    CHECK(a.trajectory[k].step == b.trajectory[k].step);
  }
  CHECK(a.final_params == b.final_params);
}
