#pragma once

#include <Eigen/Core>

#include <vector>

#include "minimax/errors.hpp"
#include "minimax/grouped_data.hpp"
#include "minimax/model.hpp"

namespace minimax {

/// Rows (x_i, 1) of the pooled samples; the matching targets.
struct DesignMatrix {
  Eigen::MatrixXd a;
  Eigen::VectorXd c;
};

DesignMatrix design_matrix(const GroupedDataset& data);

/// A^+ through a thin SVD, singular values below s_max * rows * eps treated as zero.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a);

/// (w, b) = A^+ c over all samples, grouping ignored. Minimal-norm when rank deficient.
ParameterVector least_squares_fit(const GroupedDataset& data);

struct DescentResult {
  ParameterVector params;
  /// Pooled loss at u_0 .. u_steps.
  std::vector<double> loss_curve;
  /// u_0 .. u_steps.
  std::vector<ParameterVector> iterates;
  double learning_rate = 0.0;
};

/// Plain gradient descent on the pooled squared loss.
DescentResult average_loss_descent(const Model& model, const GroupedDataset& data, int steps,
                                   double learning_rate, const ParameterVector& initial);

/// Runs average_loss_descent from `initial_rate`, halving the rate until the loss curve is
/// non-increasing. Throws ConfigError if `max_halvings` halvings do not suffice.
DescentResult monotone_average_loss_descent(const Model& model, const GroupedDataset& data,
                                            int steps, double initial_rate,
                                            const ParameterVector& initial,
                                            int max_halvings = 40);

struct ParamErrors {
  double mse = 0.0;
  double mae = 0.0;
};

/// Mean squared and mean absolute coordinate error between two parameter vectors.
ParamErrors param_error_metrics(const ParameterVector& truth, const ParameterVector& estimate);

/// Fraction of samples whose thresholded prediction (>= threshold is class 1) matches the
/// label. Labels must be exactly 0 or 1.
double classification_accuracy(const Model& model, const ParameterVector& params,
                               const GroupedDataset& data, double threshold = 0.5);

}  // namespace minimax
