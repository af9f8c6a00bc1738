#include "minimax/baselines.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

#include "minimax/group_loss.hpp"

namespace minimax {

DesignMatrix design_matrix(const GroupedDataset& data) {
  DesignMatrix out;
  out.a.resize(data.sample_count(), data.input_dim() + 1);
  out.a.leftCols(data.input_dim()) = data.pooled_x();
  out.a.col(data.input_dim()).setOnes();
  out.c = data.pooled_y();
  return out;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double cutoff = (s.size() > 0 ? s(0) : 0.0) * static_cast<double>(a.rows()) *
                        std::numeric_limits<double>::epsilon();
  Eigen::VectorXd s_inv(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) s_inv(i) = s(i) > cutoff ? 1.0 / s(i) : 0.0;
  return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().transpose();
}

ParameterVector least_squares_fit(const GroupedDataset& data) {
  const DesignMatrix dm = design_matrix(data);
  return pseudo_inverse(dm.a) * dm.c;
}

DescentResult average_loss_descent(const Model& model, const GroupedDataset& data, int steps,
                                   double learning_rate, const ParameterVector& initial) {
  if (steps < 1) throw ConfigError("descent needs at least one step");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be positive and finite");
  }
  if (initial.size() != model.param_count()) {
    throw DimensionError("initial params have the wrong length");
  }
  DescentResult out;
  out.learning_rate = learning_rate;
  out.loss_curve.reserve(static_cast<std::size_t>(steps) + 1);
  out.iterates.reserve(static_cast<std::size_t>(steps) + 1);
  ParameterVector u = initial;
  for (int k = 0;; ++k) {
    const LossValue loss = average_loss(model, u, data);
    if (!std::isfinite(loss.value) || !loss.grad.allFinite()) {
      out.params = u;
      throw NumericalError("average loss became non-finite at step " + std::to_string(k));
    }
    out.loss_curve.push_back(loss.value);
    out.iterates.push_back(u);
    if (k == steps) break;
    u -= learning_rate * loss.grad;
  }
  out.params = u;
  return out;
}

DescentResult monotone_average_loss_descent(const Model& model, const GroupedDataset& data,
                                            int steps, double initial_rate,
                                            const ParameterVector& initial, int max_halvings) {
  double rate = initial_rate;
  for (int h = 0; h <= max_halvings; ++h, rate *= 0.5) {
    DescentResult run;
    try {
      run = average_loss_descent(model, data, steps, rate, initial);
    } catch (const NumericalError&) {
      continue;
    }
    bool monotone = true;
    for (std::size_t k = 1; k < run.loss_curve.size(); ++k) {
      if (run.loss_curve[k] > run.loss_curve[k - 1]) {
        monotone = false;
        break;
      }
    }
    if (monotone) return run;
  }
  throw ConfigError("no learning rate gave a monotone loss curve");
}

ParamErrors param_error_metrics(const ParameterVector& truth, const ParameterVector& estimate) {
  if (truth.size() != estimate.size() || truth.size() == 0) {
    throw DimensionError("parameter vectors must be nonempty and of equal length");
  }
  const Eigen::ArrayXd diff = (truth - estimate).array();
  return {diff.square().mean(), diff.abs().mean()};
}

double classification_accuracy(const Model& model, const ParameterVector& params,
                               const GroupedDataset& data, double threshold) {
  Eigen::Index correct = 0;
  for (const Group& g : data.groups()) {
    for (Eigen::Index l = 0; l < g.size(); ++l) {
      const double label = g.y(l);
      if (label != 0.0 && label != 1.0) {
        throw LabelError("label " + std::to_string(label) + " in group '" + g.id +
                         "' is not 0 or 1");
      }
      const double predicted = model.predict(params, g.x.row(l).transpose()) >= threshold ? 1.0 : 0.0;
      if (predicted == label) ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(data.sample_count());
}

}  // namespace minimax
