#include "minimax/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "minimax/random.hpp"

namespace minimax {

void SolverConfig::validate() const {
  if (!(xi > 0.0)) throw ConfigError("xi must be positive");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("sigma must lie in (0, 1)");
  if (max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
  if (max_backtracks < 0) throw ConfigError("max_backtracks must be >= 0");
}

ParameterVector make_initial_params(const InitialParams& init, int param_count) {
  struct Visitor {
    int n;
    ParameterVector operator()(const ZeroInit&) const { return ParameterVector::Zero(n); }
    ParameterVector operator()(const ParameterVector& explicit_params) const {
      if (explicit_params.size() != n) {
        throw DimensionError("initial params have length " +
                             std::to_string(explicit_params.size()) + ", model needs " +
                             std::to_string(n));
      }
      if (!explicit_params.allFinite()) throw ConfigError("initial params must be finite");
      return explicit_params;
    }
    ParameterVector operator()(const RandomInit& r) const {
      Rng rng(r.seed);
      ParameterVector u(n);
      for (int i = 0; i < n; ++i) u(i) = rng.uniform(-r.scale, r.scale);
      return u;
    }
  };
  return std::visit(Visitor{param_count}, init);
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::ConvergedDirectionNorm:
      return "converged_direction_norm";
    case SolveStatus::MaxIterations:
      return "max_iterations";
    case SolveStatus::LineSearchStagnation:
      return "line_search_stagnation";
  }
  return "unknown";
}

std::vector<double> SolveReport::phi_curve() const {
  std::vector<double> curve;
  curve.reserve(trajectory.size() + 1);
  for (const auto& rec : trajectory) curve.push_back(rec.phi);
  curve.push_back(final_phi);
  return curve;
}

Direction descent_direction(const GroupJacobian& jac, double delta) {
  if (jac.g.rows() != jac.f.size() || jac.g.rows() == 0) {
    throw DimensionError("Jacobian and loss vector disagree on the group count");
  }
  SimplexQP qp;
  qp.q.noalias() = jac.g * jac.g.transpose();
  // Exact symmetry; the product is symmetric only up to rounding.
  qp.q = 0.5 * (qp.q + qp.q.transpose()).eval();
  qp.c = jac.f;
  SimplexQPSolution sol = solve_simplex_qp(qp, delta);
  Direction out;
  out.d = -(jac.g.transpose() * sol.lambda);
  out.lambda = std::move(sol.lambda);
  out.kkt_residual = sol.kkt_residual;
  out.qp_iterations = sol.iterations;
  return out;
}

LineSearchResult backtracking_line_search(const PhiEvaluator& phi, const ParameterVector& params,
                                          double phi_at_params, const Eigen::VectorXd& d,
                                          double sigma, int max_backtracks) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("sigma must lie in (0, 1)");
  if (d.size() != params.size()) throw DimensionError("direction and params differ in length");
  if (!(d.norm() > 0.0)) throw ConfigError("line search needs a nonzero direction");
  double alpha = 1.0;
  for (int j = 0; j <= max_backtracks; ++j) {
    ParameterVector trial = params + alpha * d;
    const double value = phi(trial);
    if (std::isfinite(value) && value < phi_at_params) {
      return {alpha, std::move(trial), value, j};
    }
    alpha *= sigma;
  }
  throw LineSearchStagnation(max_backtracks + 1);
}

LineSearchResult backtracking_line_search(const PhiEvaluator& phi, const ParameterVector& params,
                                          const Eigen::VectorXd& d, double sigma,
                                          int max_backtracks) {
  return backtracking_line_search(phi, params, phi(params), d, sigma, max_backtracks);
}

SolveReport solve(const Model& model, const GroupedDataset& data, const SolverConfig& config) {
  config.validate();
  if (model.input_dim() != data.input_dim()) {
    throw DimensionError("model expects inputs of dimension " +
                         std::to_string(model.input_dim()) + ", dataset has " +
                         std::to_string(data.input_dim()));
  }

  SolveReport report;
  ParameterVector u = make_initial_params(config.initial_params, model.param_count());
  const PhiEvaluator evaluate = [&](const ParameterVector& p) {
    ++report.phi_evaluations;
    return phi_value(model, p, data);
  };

  for (int k = 0;; ++k) {
    const GroupJacobian jac = jacobian(model, u, data);
    const double phi_k = jac.f.maxCoeff();
    if (!std::isfinite(phi_k) || !jac.g.allFinite()) {
      throw SolverNumericalError("non-finite objective or Jacobian at iteration " +
                                     std::to_string(k),
                                 std::move(report.trajectory));
    }
    report.final_params = u;
    report.final_phi = phi_k;

    Direction dir = descent_direction(jac, config.delta);
    report.qp_iterations += dir.qp_iterations;
    const double norm = dir.d.norm();
    report.final_direction_norm = norm;
    if (norm < config.xi) {
      report.status = SolveStatus::ConvergedDirectionNorm;
      return report;
    }
    if (k >= config.max_iterations) {
      report.status = SolveStatus::MaxIterations;
      return report;
    }

    LineSearchResult step;
    try {
      step = backtracking_line_search(evaluate, u, phi_k, dir.d, config.sigma,
                                      config.max_backtracks);
    } catch (const LineSearchStagnation&) {
      report.status = SolveStatus::LineSearchStagnation;
      return report;
    }

    IterationRecord rec;
    rec.k = k;
    rec.params = u;
    rec.phi = phi_k;
    rec.direction_norm = norm;
    rec.step = step.alpha;
    rec.lambda = std::move(dir.lambda);
    rec.backtracks = step.backtracks;
    rec.qp_iterations = dir.qp_iterations;
    report.trajectory.push_back(std::move(rec));
    u = std::move(step.params);
  }
}

double directional_derivative(const Model& model, const GroupedDataset& data,
                              const ParameterVector& params, const Eigen::VectorXd& d) {
  if (d.size() != params.size()) throw DimensionError("direction and params differ in length");
  const PhiValue current = phi(model, params, data);
  double best = -std::numeric_limits<double>::infinity();
  for (int j : current.active_set) {
    const LossValue loss = group_loss(model, params, data.group(static_cast<std::size_t>(j)));
    best = std::max(best, loss.grad.dot(d));
  }
  return best;
}

double linearized_model(const GroupJacobian& jac, const Eigen::VectorXd& d) {
  return (jac.f + jac.g * d).maxCoeff() + 0.5 * d.squaredNorm();
}

}  // namespace minimax
