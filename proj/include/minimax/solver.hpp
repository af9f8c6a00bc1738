#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string_view>
#include <variant>
#include <vector>

#include "minimax/errors.hpp"
#include "minimax/group_loss.hpp"
#include "minimax/grouped_data.hpp"
#include "minimax/model.hpp"
#include "minimax/simplex_qp.hpp"

namespace minimax {

struct ZeroInit {};
struct RandomInit {
  std::uint64_t seed = 0;
  double scale = 1.0;  ///< entries uniform on [-scale, scale]
};
using InitialParams = std::variant<ZeroInit, ParameterVector, RandomInit>;

struct SolverConfig {
  double xi = 1e-8;      ///< stop once ||d|| < xi
  double delta = kDefaultQpTolerance;
  double sigma = 0.5;    ///< backtracking factor
  int max_iterations = 500;
  int max_backtracks = 60;
  InitialParams initial_params = ZeroInit{};

  /// Throws ConfigError unless xi > 0, delta > 0, 0 < sigma < 1 and the counts are >= 0.
  void validate() const;
};

ParameterVector make_initial_params(const InitialParams& init, int param_count);

/// One accepted step u_{k+1} = u_k + step * d_k.
struct IterationRecord {
  int k = 0;
  ParameterVector params;  ///< u_k
  double phi = 0.0;        ///< Phi(u_k)
  double direction_norm = 0.0;
  double step = 1.0;
  Eigen::VectorXd lambda;
  int backtracks = 0;
  int qp_iterations = 0;
};

enum class SolveStatus { ConvergedDirectionNorm, MaxIterations, LineSearchStagnation };

std::string_view to_string(SolveStatus status);

struct SolveReport {
  ParameterVector final_params;
  SolveStatus status = SolveStatus::MaxIterations;
  std::vector<IterationRecord> trajectory;
  double final_phi = 0.0;
  double final_direction_norm = 0.0;
  int phi_evaluations = 0;
  int qp_iterations = 0;

  /// Phi at u_0 .. u_K: one entry per accepted step plus the final point.
  std::vector<double> phi_curve() const;
};

/// Non-finite Phi at an iterate; carries everything recorded before it.
class SolverNumericalError : public NumericalError {
 public:
  SolverNumericalError(const std::string& what, std::vector<IterationRecord> trajectory)
      : NumericalError(what), trajectory_(std::move(trajectory)) {}
  const std::vector<IterationRecord>& trajectory() const noexcept { return trajectory_; }

 private:
  std::vector<IterationRecord> trajectory_;
};

/// No j <= max_backtracks gives a strict decrease.
class LineSearchStagnation : public Error {
 public:
  explicit LineSearchStagnation(int tried)
      : Error("line search found no decrease in " + std::to_string(tried) + " trials"),
        tried_(tried) {}
  int tried() const noexcept { return tried_; }

 private:
  int tried_;
};

struct Direction {
  Eigen::VectorXd d;
  Eigen::VectorXd lambda;
  double kkt_residual = 0.0;
  int qp_iterations = 0;
};

/// d = -G' lambda with lambda the simplex-QP solution for Q = GG', c = f.
Direction descent_direction(const GroupJacobian& jac, double delta = kDefaultQpTolerance);

struct LineSearchResult {
  double alpha = 1.0;
  ParameterVector params;
  double phi = 0.0;
  int backtracks = 0;  ///< the j of alpha = sigma^j
};

using PhiEvaluator = std::function<double(const ParameterVector&)>;

/// Smallest j in [0, max_backtracks] with Phi(u + sigma^j d) < Phi(u). A non-finite
/// trial value counts as no decrease. Throws LineSearchStagnation otherwise.
LineSearchResult backtracking_line_search(const PhiEvaluator& phi, const ParameterVector& params,
                                          double phi_at_params, const Eigen::VectorXd& d,
                                          double sigma, int max_backtracks);

/// Convenience overload that evaluates Phi(u) itself.
LineSearchResult backtracking_line_search(const PhiEvaluator& phi, const ParameterVector& params,
                                          const Eigen::VectorXd& d, double sigma,
                                          int max_backtracks);

/// Mini-max descent: linearize every group loss, take the proximal step from the dual
/// simplex QP, backtrack until Phi strictly decreases.
SolveReport solve(const Model& model, const GroupedDataset& data, const SolverConfig& config = {});

/// Phi'(u; d) = max over the active set of <grad f_j(u), d>.
double directional_derivative(const Model& model, const GroupedDataset& data,
                              const ParameterVector& params, const Eigen::VectorXd& d);

/// max_j (f_j + <G_j, d>) + ||d||^2 / 2, the proximal model minimized by the direction.
double linearized_model(const GroupJacobian& jac, const Eigen::VectorXd& d);

}  // namespace minimax
