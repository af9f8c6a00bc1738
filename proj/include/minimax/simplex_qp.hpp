#pragma once

#include <Eigen/Core>

#include "minimax/errors.hpp"

namespace minimax {

/// min 1/2 l'Ql - c'l  subject to  sum(l) = 1, l >= 0.
struct SimplexQP {
  Eigen::MatrixXd q;  ///< symmetric PSD, N x N
  Eigen::VectorXd c;  ///< N
};

struct SimplexQPSolution {
  Eigen::VectorXd lambda;
  double objective = 0.0;
  double kkt_residual = 0.0;
  int iterations = 0;
};

/// Thrown when the active-set loop hits its cap or finishes above tolerance.
class QPConvergenceError : public NumericalError {
 public:
  QPConvergenceError(const std::string& what, SimplexQPSolution best)
      : NumericalError(what), best_(std::move(best)) {}

  const SimplexQPSolution& best_iterate() const noexcept { return best_; }

 private:
  SimplexQPSolution best_;
};

inline constexpr double kDefaultQpTolerance = 1e-7;

double simplex_qp_objective(const SimplexQP& problem, const Eigen::VectorXd& lambda);

/// Optimality certificate. With g = Q lambda - c and nu = min_i g_i this is the largest
/// g_i - nu over the support (lambda_i > 1e-12), or the feasibility violation if larger.
/// Zero exactly at a KKT point. Throws InfeasibleError when lambda is off the simplex by
/// more than 1e-9.
double kkt_residual(const SimplexQP& problem, const Eigen::VectorXd& lambda);

/// Primal active-set method over the simplex.
///
/// Starts from the best vertex and keeps a free set F (all other weights pinned at zero).
/// Each pass solves the equality-constrained subproblem on F through its bordered KKT
/// system; an infeasible subproblem solution is clipped by a ratio test that drops the
/// blocking weight, otherwise the pinned weight with the most negative reduced gradient
/// g_i - nu is released. Ties go to the smallest index. Q_FF gets a 1e-12 * max(1, max Q_ii)
/// ridge since Q = GG' is rank deficient whenever N > n. At most 50 N active-set changes.
SimplexQPSolution solve_simplex_qp(const SimplexQP& problem,
                                   double delta = kDefaultQpTolerance);

}  // namespace minimax
