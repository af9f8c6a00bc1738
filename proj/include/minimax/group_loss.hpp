#pragma once

#include <Eigen/Core>

#include <functional>
#include <vector>

#include "minimax/grouped_data.hpp"
#include "minimax/model.hpp"

namespace minimax {

struct LossValue {
  double value = 0.0;
  Eigen::VectorXd grad;
};

/// Rows of `g` are the gradients of the per-group losses in `f`.
struct GroupJacobian {
  Eigen::MatrixXd g;
  Eigen::VectorXd f;
};

struct PhiValue {
  double value = 0.0;
  /// Groups within active_tolerance(value) of the maximum, ascending.
  std::vector<int> active_set;
  Eigen::VectorXd per_group;
};

/// 1e-10 * max(1, |phi|): exact ties are meaningless in floating point.
double active_tolerance(double phi) noexcept;

/// Mean squared residual of one group and its gradient. Accumulates in sample order.
LossValue group_loss(const Model& model, const ParameterVector& params, const Group& group);

/// Loss value only; same summation order as group_loss.
double group_loss_value(const Model& model, const ParameterVector& params, const Group& group);

/// max_j f_j, the per-group losses and the active set.
PhiValue phi(const Model& model, const ParameterVector& params, const GroupedDataset& data);

/// Only the max; cheaper than phi() for line searches.
double phi_value(const Model& model, const ParameterVector& params, const GroupedDataset& data);

GroupJacobian jacobian(const Model& model, const ParameterVector& params,
                       const GroupedDataset& data);

/// Squared loss pooled over all samples (weights 1/m, groups ignored).
LossValue average_loss(const Model& model, const ParameterVector& params,
                       const GroupedDataset& data);

using ScalarFunction = std::function<double(const Eigen::VectorXd&)>;

/// Central differences with per-coordinate step h * max(1, |u_i|).
Eigen::VectorXd finite_difference_gradient(const ScalarFunction& fn, const Eigen::VectorXd& at,
                                           double h = 1e-6);

}  // namespace minimax
