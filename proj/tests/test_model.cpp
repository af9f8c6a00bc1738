#include <doctest.h>

#include <cmath>

#include "minimax/errors.hpp"
#include "minimax/group_loss.hpp"
#include "minimax/model.hpp"
#include "oracles.hpp"

using minimax::Model;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("linear predict") {
  const Model m = Model::linear(1);
  CHECK(m.predict(vec({1.75, 1.25}), vec({0.15})) == doctest::Approx(1.5125).epsilon(1e-15));
  CHECK(m.predict(vec({0.0, 3.5}), vec({-7.0})) == 3.5);
  CHECK(m.param_count() == 2);
}

TEST_CASE("sigmoid predict is one half at zero and stays in (0,1)") {
  const Model m = Model::sigmoid_unit(3);
  CHECK(m.predict(Eigen::VectorXd::Zero(4), vec({5.0, -2.0, 9.0})) == 0.5);
  Eigen::VectorXd big = vec({0.0, 0.0, 0.0, 700.0});
  const double hi = m.predict(big, vec({1.0, 1.0, 1.0}));
  CHECK(std::isfinite(hi));
  CHECK(hi <= 1.0);
  const double lo = m.predict(-big, vec({1.0, 1.0, 1.0}));
  CHECK(lo >= 0.0);
  CHECK(lo < 1e-300);
  CHECK(minimax::sigmoid(-1000.0) == 0.0);
  CHECK(minimax::sigmoid(30.0) < 1.0);
  CHECK(minimax::sigmoid(-30.0) > 0.0);
}

TEST_CASE("param gradient closed forms") {
  const Model lin = Model::linear(2);
  const Eigen::VectorXd g = lin.param_gradient(vec({0.3, -4.0, 2.0}), vec({2.0, 3.0}));
  CHECK(g == vec({2.0, 3.0, 1.0}));

  const Model sig = Model::sigmoid_unit(1);
  const Eigen::VectorXd gs = sig.param_gradient(vec({0.0, 0.0}), vec({1.0}));
  CHECK(gs(0) == doctest::Approx(0.25));
  CHECK(gs(1) == doctest::Approx(0.25));
  const auto fd = minimax::finite_difference_gradient(
      [&](const Eigen::VectorXd& p) { return sig.predict(p, vec({1.0})); }, vec({0.0, 0.0}));
  CHECK(oracle::relative_error(gs, fd) < 1e-9);

  const Eigen::VectorXd saturated = sig.param_gradient(vec({0.0, 800.0}), vec({1.0}));
  CHECK(saturated.cwiseAbs().maxCoeff() < 1e-300);
}

TEST_CASE("dimension mismatch throws") {
  const Model m = Model::linear(2);
  CHECK_THROWS_AS(m.predict(vec({1.0, 2.0}), vec({1.0, 2.0})), minimax::DimensionError);
  CHECK_THROWS_AS(m.predict(vec({1.0, 2.0, 3.0}), vec({1.0})), minimax::DimensionError);
  CHECK_THROWS_AS(m.param_gradient(vec({1.0}), vec({1.0, 2.0})), minimax::DimensionError);
  CHECK_THROWS_AS(Model::linear(0), minimax::DimensionError);
  CHECK_THROWS_AS(Model::from_name("mlp", 2), minimax::ConfigError);
}

TEST_CASE("property: param gradient matches central differences") {
  minimax::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 5;
    const Model m = trial % 2 ? Model::sigmoid_unit(d) : Model::linear(d);
    Eigen::VectorXd params(d + 1), x(d);
    for (int i = 0; i <= d; ++i) params(i) = rng.uniform(-2.0, 2.0);
    for (int i = 0; i < d; ++i) x(i) = rng.normal();
    const Eigen::VectorXd analytic = m.param_gradient(params, x);
    const Eigen::VectorXd fd = minimax::finite_difference_gradient(
        [&](const Eigen::VectorXd& p) { return m.predict(p, x); }, params, 1e-6);
    CHECK(oracle::relative_error(fd, analytic) <= 1e-6);
    if (m.kind() == Model::Kind::SigmoidUnit) {
      const double s = m.predict(params, x);
      CHECK(s > 0.0);
      CHECK(s < 1.0);
    }
  }
}
