#include "minimax/simplex_qp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

namespace minimax {

namespace {

constexpr double kSupportThreshold = 1e-12;
constexpr double kFeasibilitySlack = 1e-9;

void validate(const SimplexQP& problem) {
  const auto n = problem.c.size();
  if (n < 1) {
    throw DimensionError("simplex QP needs at least one variable");
  }
  if (problem.q.rows() != n || problem.q.cols() != n) {
    throw DimensionError("simplex QP: Q must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!problem.q.allFinite() || !problem.c.allFinite()) {
    throw NumericalError("simplex QP has non-finite entries");
  }
  const double scale = std::max(1.0, problem.q.cwiseAbs().maxCoeff());
  if ((problem.q - problem.q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw NumericalError("simplex QP: Q is not symmetric");
  }
}

}  // namespace

double simplex_qp_objective(const SimplexQP& problem, const Eigen::VectorXd& lambda) {
  return 0.5 * lambda.dot(problem.q * lambda) - problem.c.dot(lambda);
}

double kkt_residual(const SimplexQP& problem, const Eigen::VectorXd& lambda) {
  if (lambda.size() != problem.c.size()) {
    throw DimensionError("lambda has wrong length");
  }
  const double sum_violation = std::abs(lambda.sum() - 1.0);
  const double sign_violation = std::max(0.0, -lambda.minCoeff());
  if (!lambda.allFinite() || sum_violation > kFeasibilitySlack ||
      sign_violation > kFeasibilitySlack) {
    throw InfeasibleError("lambda is not on the probability simplex");
  }
  const Eigen::VectorXd g = problem.q * lambda - problem.c;
  const double nu = g.minCoeff();
  double residual = std::max(sum_violation, sign_violation);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (lambda(i) > kSupportThreshold) residual = std::max(residual, g(i) - nu);
  }
  return residual;
}

SimplexQPSolution solve_simplex_qp(const SimplexQP& problem, double delta) {
  validate(problem);
  if (!(delta > 0.0)) {
    throw ConfigError("QP tolerance delta must be positive");
  }
  const auto n = problem.c.size();
  const Eigen::MatrixXd& q = problem.q;
  const Eigen::VectorXd& c = problem.c;

  SimplexQPSolution sol;
  sol.lambda = Eigen::VectorXd::Zero(n);
  if (n == 1) {
    sol.lambda(0) = 1.0;
    sol.objective = simplex_qp_objective(problem, sol.lambda);
    return sol;
  }

  // Both scale with the data so tiny problems (Phi near 0) are still solved to
  // full relative accuracy; delta only caps the entering tolerance from above.
  const double q_scale = q.diagonal().cwiseAbs().maxCoeff();
  const double scale = std::max(q_scale, c.maxCoeff() - c.minCoeff());
  const double ridge = 1e-12 * std::max(q_scale, std::numeric_limits<double>::min());
  const double enter_tolerance = std::min(0.1 * delta, 1e-12 * scale);
  const int max_changes = 50 * static_cast<int>(n);

  // Best vertex: objective at e_i is Q_ii / 2 - c_i.
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (0.5 * q(i, i) - c(i) < 0.5 * q(start, start) - c(start)) start = i;
  }
  std::vector<Eigen::Index> free_set{start};  // sorted ascending
  sol.lambda(start) = 1.0;

  auto fail = [&](const std::string& why) {
    sol.objective = simplex_qp_objective(problem, sol.lambda);
    sol.kkt_residual = kkt_residual(problem, sol.lambda);
    throw QPConvergenceError(why, sol);
  };

  Eigen::VectorXd g(n);
  while (true) {
    const auto m = static_cast<Eigen::Index>(free_set.size());
    // [Q_FF + rI  1] [l ]   [c_F]
    // [1'         0] [mu] = [1  ]
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs(m + 1);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) kkt(a, b) = q(free_set[a], free_set[b]);
      kkt(a, a) += ridge;
      kkt(a, m) = 1.0;
      kkt(m, a) = 1.0;
      rhs(a) = c(free_set[a]);
    }
    rhs(m) = 1.0;
    const Eigen::VectorXd target = kkt.fullPivLu().solve(rhs).head(m);
    if (!target.allFinite()) {
      fail("simplex QP: singular reduced KKT system");
    }

    Eigen::Index blocking = -1;
    double alpha = 1.0;
    for (Eigen::Index a = 0; a < m; ++a) {
      const double current = sol.lambda(free_set[a]);
      const double step = target(a) - current;
      if (target(a) < 0.0 && step < 0.0) {
        const double ratio = current / -step;
        if (blocking < 0 || ratio < alpha) {
          alpha = ratio;
          blocking = a;
        }
      }
    }

    if (blocking >= 0) {
      for (Eigen::Index a = 0; a < m; ++a) {
        const Eigen::Index i = free_set[a];
        sol.lambda(i) = std::max(0.0, sol.lambda(i) + alpha * (target(a) - sol.lambda(i)));
      }
      sol.lambda(free_set[blocking]) = 0.0;
      free_set.erase(free_set.begin() + blocking);
      sol.lambda /= sol.lambda.sum();
    } else {
      for (Eigen::Index a = 0; a < m; ++a) sol.lambda(free_set[a]) = target(a);

      g = -c;
      for (Eigen::Index i : free_set) g += sol.lambda(i) * q.col(i);
      double nu = 0.0;
      for (Eigen::Index i : free_set) nu += g(i);
      nu /= static_cast<double>(m);

      Eigen::Index entering = -1;
      double most_negative = -enter_tolerance;
      auto next_free = free_set.begin();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (next_free != free_set.end() && *next_free == i) {
          ++next_free;
          continue;
        }
        if (g(i) - nu < most_negative) {
          most_negative = g(i) - nu;
          entering = i;
        }
      }
      if (entering < 0) break;
      free_set.insert(std::upper_bound(free_set.begin(), free_set.end(), entering), entering);
    }

    if (++sol.iterations > max_changes) {
      fail("simplex QP: active-set change limit (" + std::to_string(max_changes) + ") exceeded");
    }
  }

  sol.objective = simplex_qp_objective(problem, sol.lambda);
  sol.kkt_residual = kkt_residual(problem, sol.lambda);
  if (sol.kkt_residual > delta) {
    char msg[96];
    std::snprintf(msg, sizeof(msg), "simplex QP: KKT residual %.3e above tolerance %.3e",
                  sol.kkt_residual, delta);
    throw QPConvergenceError(msg, sol);
  }
  return sol;
}

}  // namespace minimax
